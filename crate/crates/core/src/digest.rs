//! Short content digests used to identify states in reports.

use sha2::{Digest, Sha256};

use crate::matcore::ComplexMatrix;

/// Hex SHA-256 prefix (64 bits) of arbitrary bytes.
pub fn bytes_digest(bytes: &[u8]) -> String {
    let hash = Sha256::digest(bytes);
    hash[..8].iter().map(|b| format!("{b:02x}")).collect()
}

/// Digest of a matrix over its canonical little-endian f64 layout
/// (row-major, re then im per entry).
pub fn matrix_digest(matrix: &ComplexMatrix) -> String {
    let mut bytes = Vec::with_capacity(matrix.entries().len() * 16);
    for z in matrix.entries() {
        bytes.extend_from_slice(&z.re.to_le_bytes());
        bytes.extend_from_slice(&z.im.to_le_bytes());
    }
    bytes_digest(&bytes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::identity;

    #[test]
    fn digest_is_stable_and_input_sensitive() {
        let a = matrix_digest(&identity(2));
        let b = matrix_digest(&identity(2));
        assert_eq!(a, b);
        assert_eq!(a.len(), 16);
        assert_ne!(a, matrix_digest(&identity(4)));
    }
}
