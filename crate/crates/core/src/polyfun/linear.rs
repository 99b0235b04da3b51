use crate::error::{Error, Result};
use crate::field::{FieldTower, Level};

use super::map::FieldFn;
use super::matrix::Matrix;

/// An `F_q`-linear map of `F_{q^n}`, held both as its `n×n` matrix on the
/// basis `1, t, ..., t^{n-1}` and as a value table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearMap {
    matrix: Matrix,
    qpoly: Option<Vec<u32>>,
    table: FieldFn,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearAnalysis {
    pub kernel: Vec<u32>,
    pub image: Vec<u32>,
    pub is_permutation: bool,
    pub ker_im_trivial: bool,
}

impl LinearMap {
    pub fn from_matrix(tower: &FieldTower, matrix: Matrix) -> Result<LinearMap> {
        let n = tower.n() as usize;
        if matrix.rows() != n || matrix.cols() != n {
            return Err(Error::DegreeMismatch(format!("linear map matrix must be {n}x{n}")));
        }
        let (top, base) = (tower.top(), tower.base());
        let table = FieldFn::from_fn(tower, Level::Top, Level::Top, |x| {
            top.from_coeffs(&matrix.mul_vec(base, &top.coeffs(x)))
        });
        Ok(LinearMap { matrix, qpoly: None, table })
    }

    /// Reads the matrix off the images of the basis and checks every other
    /// point against it; fails if the table is not `F_q`-linear.
    pub fn from_table(tower: &FieldTower, table: FieldFn) -> Result<LinearMap> {
        if table.dom() != Level::Top || table.cod() != Level::Top {
            return Err(Error::LevelMismatch { expected: Level::Top, got: table.cod() });
        }
        let top = tower.top();
        let q = tower.q();
        let columns: Vec<Vec<u32>> = (0..tower.n()).map(|j| top.coeffs(table.apply(q.pow(j)))).collect();
        let candidate = LinearMap::from_matrix(tower, Matrix::from_columns(&columns))?;
        if candidate.table != table {
            return Err(Error::NotLinear);
        }
        Ok(LinearMap { table, ..candidate })
    }

    /// `L(x) = Σ c_i x^(q^i)` with top-level coefficients.
    pub fn from_qpoly(tower: &FieldTower, coeffs: &[u32]) -> Result<LinearMap> {
        let top = tower.top();
        if let Some(&c) = coeffs.iter().find(|&&c| !top.contains(c)) {
            return Err(Error::CodeOutOfRange { level: Level::Top, code: c, order: top.order() });
        }
        let k = tower.k();
        let table = FieldFn::from_fn(tower, Level::Top, Level::Top, |x| {
            coeffs
                .iter()
                .enumerate()
                .fold(0, |acc, (i, &c)| top.add(acc, top.mul(c, top.frobenius(x, k * i as u32))))
        });
        let mut map = LinearMap::from_table(tower, table)?;
        map.qpoly = Some(coeffs.to_vec());
        Ok(map)
    }

    pub fn identity(tower: &FieldTower) -> LinearMap {
        LinearMap::from_matrix(tower, Matrix::identity(tower.n() as usize)).expect("square")
    }

    pub fn zero(tower: &FieldTower) -> LinearMap {
        let n = tower.n() as usize;
        LinearMap::from_matrix(tower, Matrix::zeros(n, n)).expect("square")
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn qpoly(&self) -> Option<&[u32]> {
        self.qpoly.as_deref()
    }

    pub fn as_fn(&self) -> &FieldFn {
        &self.table
    }

    #[inline]
    pub fn apply(&self, x: u32) -> u32 {
        self.table.apply(x)
    }

    pub fn is_permutation(&self, tower: &FieldTower) -> bool {
        self.matrix.rank(tower.base()) == self.matrix.rows()
    }

    pub fn inverse(&self, tower: &FieldTower) -> Option<LinearMap> {
        let inv = self.matrix.inverse(tower.base())?;
        LinearMap::from_matrix(tower, inv).ok()
    }

    /// Kernel and image bases (as top codes), permutation status, and
    /// whether `Ker L ∩ Im L = {0}`, all by elimination over `F_q`.
    pub fn analyze(&self, tower: &FieldTower) -> LinearAnalysis {
        let (top, base) = (tower.top(), tower.base());
        let kernel_vecs = self.matrix.nullspace(base);
        let image_vecs = self.matrix.column_space(base);
        let stacked = Matrix::from_rows(kernel_vecs.iter().chain(image_vecs.iter()).cloned().collect());
        let sum_dim = if stacked.rows() == 0 { 0 } else { stacked.rank(base) };
        LinearAnalysis {
            kernel: kernel_vecs.iter().map(|v| top.from_coeffs(v)).collect(),
            image: image_vecs.iter().map(|v| top.from_coeffs(v)).collect(),
            is_permutation: kernel_vecs.is_empty(),
            ker_im_trivial: sum_dim == kernel_vecs.len() + image_vecs.len(),
        }
    }
}

/// Rank over `F_q` of top elements read as coordinate vectors.
pub fn span_rank(tower: &FieldTower, elems: &[u32]) -> usize {
    if elems.is_empty() {
        return 0;
    }
    let rows = elems.iter().map(|&e| tower.top().coeffs(e)).collect();
    Matrix::from_rows(rows).rank(tower.base())
}
