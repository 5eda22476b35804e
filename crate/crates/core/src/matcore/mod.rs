//! Minimal dense linear algebra for small quantum systems.
//!
//! Everything here targets matrices of dimension at most 8 (three
//! qubits), so the eigensolvers use cyclic Jacobi rotations: robust,
//! dependency-free, and plenty fast at these sizes. Qubit 0 is always
//! the leftmost tensor factor, i.e. the most significant bit of a
//! basis index.

mod complex;
mod real3;

pub use complex::{ComplexMatrix, ComplexScalar};
pub use real3::{sym3_eigensystem, RealMatrix3, Sym3Eigensystem, Vector3};

/// Identity matrix of the given dimension.
pub fn identity(dim: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        m.set(i, i, ComplexScalar::new(1.0, 0.0));
    }
    m
}

/// Pauli sigma_x.
pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_re_im(2, &[0.0, 1.0, 1.0, 0.0], &[0.0; 4])
}

/// Pauli sigma_y.
pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::from_re_im(2, &[0.0; 4], &[0.0, -1.0, 1.0, 0.0])
}

/// Pauli sigma_z.
pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_re_im(2, &[1.0, 0.0, 0.0, -1.0], &[0.0; 4])
}

/// Pauli operator by axis index, 0..=2 mapping to x, y, z.
pub fn pauli(axis: usize) -> ComplexMatrix {
    match axis {
        0 => pauli_x(),
        1 => pauli_y(),
        2 => pauli_z(),
        _ => panic!("pauli axis must be 0, 1 or 2, got {axis}"),
    }
}
