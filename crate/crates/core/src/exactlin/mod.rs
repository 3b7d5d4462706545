//! Exact arithmetic over `F_p` and `Q`, with dense matrices for canonical
//! forms and a sparse incremental echelon for the large, nearly monomial
//! systems that come out of graded components.

mod field;
mod matrix;
mod sparse;

pub use field::{FieldSpec, Scalar, MAX_PRIME};
pub use matrix::Matrix;
pub use sparse::{Echelon, SparseVec};

pub fn rref(m: &Matrix) -> (Matrix, Vec<usize>) {
    m.rref()
}

pub fn kernel_basis(m: &Matrix) -> Matrix {
    m.kernel_basis()
}

pub fn rank(m: &Matrix) -> usize {
    m.rank()
}
