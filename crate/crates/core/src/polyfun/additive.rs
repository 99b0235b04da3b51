use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldTower, Level};

use super::matrix::Matrix;

/// A bijective linearized polynomial `A(x) = Σ a_i x^(p^i)` over `F_q`,
/// with its inverse computed once from the `F_p`-matrix of `A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdditivePerm {
    coeffs: Vec<u32>,
    matrix: Matrix,
    inverse_matrix: Matrix,
    table: Vec<u32>,
    inv_table: Vec<u32>,
    monomial: Option<u32>,
}

impl AdditivePerm {
    /// Coefficient `i` multiplies `x^(p^i)`; indices at or above `k` fold
    /// back since `x^(p^k) = x` on `F_q`.
    pub fn new(tower: &FieldTower, coeffs: &[u32]) -> Result<AdditivePerm> {
        let base = tower.base();
        let k = tower.k() as usize;
        let mut folded = vec![0u32; k];
        for (i, &c) in coeffs.iter().enumerate() {
            if c >= base.order() {
                return Err(Error::CodeOutOfRange { level: Level::Base, code: c, order: base.order() });
            }
            folded[i % k] = base.add(folded[i % k], c);
        }
        let monomial = match folded.iter().filter(|&&c| c != 0).count() {
            1 => folded.iter().position(|&c| c == 1).map(|i| i as u32),
            _ => None,
        };
        Self::assemble(tower, folded, monomial)
    }

    pub fn identity(tower: &FieldTower) -> AdditivePerm {
        Self::new(tower, &[1]).expect("identity is bijective")
    }

    /// `A(x) = x^(p^t)`; requires `t <= k`.
    pub fn frobenius(tower: &FieldTower, t: u32) -> Result<AdditivePerm> {
        if t > tower.k() {
            return Err(Error::BadT { t, k: tower.k() });
        }
        let mut coeffs = vec![0u32; t as usize + 1];
        coeffs[t as usize] = 1;
        let mut a = Self::new(tower, &coeffs)?;
        a.monomial = Some(t);
        Ok(a)
    }

    fn assemble(tower: &FieldTower, coeffs: Vec<u32>, monomial: Option<u32>) -> Result<AdditivePerm> {
        let base = tower.base();
        let prime = tower.prime();
        let k = coeffs.len();
        let eval = |u: u32| {
            coeffs
                .iter()
                .enumerate()
                .fold(0, |acc, (i, &a)| base.add(acc, base.mul(a, base.frobenius(u, i as u32))))
        };
        let table: Vec<u32> = base.elements().map(eval).collect();
        let p = tower.p();
        let columns: Vec<Vec<u32>> = (0..k).map(|j| base.digits(table[p.pow(j as u32) as usize])).collect();
        let matrix = Matrix::from_columns(&columns);
        let inverse_matrix = matrix.inverse(prime).ok_or(Error::NotBijective)?;
        let from_digits = |d: &[u32]| d.iter().rev().fold(0u32, |acc, &c| acc * p + c);
        let inv_table = base
            .elements()
            .map(|v| from_digits(&inverse_matrix.mul_vec(prime, &base.digits(v))))
            .collect();
        Ok(AdditivePerm { coeffs, matrix, inverse_matrix, table, inv_table, monomial })
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    /// `Some(t)` when `A(x) = x^(p^t)`.
    pub fn monomial_exponent(&self) -> Option<u32> {
        self.monomial
    }

    pub fn is_identity(&self) -> bool {
        self.table.iter().enumerate().all(|(u, &v)| u as u32 == v)
    }

    /// `F_p`-matrix of `A` on the digit basis (column `j` is `A(p^j)`).
    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn inverse_matrix(&self) -> &Matrix {
        &self.inverse_matrix
    }

    #[inline]
    pub fn apply(&self, u: u32) -> u32 {
        self.table[u as usize]
    }

    #[inline]
    pub fn apply_inverse(&self, u: u32) -> u32 {
        self.inv_table[u as usize]
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    pub fn inverse_table(&self) -> &[u32] {
        &self.inv_table
    }

    /// Linearized coefficients of `A^{-1}`, found by solving the Moore
    /// system `Σ_i c_i β^(p^i) = A^{-1}(β)` over the digit basis `β`.
    pub fn inverse_coeffs(&self, tower: &FieldTower) -> Vec<u32> {
        let base = tower.base();
        let p = tower.p();
        let k = self.coeffs.len();
        let basis: Vec<u32> = (0..k).map(|j| p.pow(j as u32)).collect();
        let moore = Matrix::from_rows(
            basis
                .iter()
                .map(|&b| (0..k).map(|i| base.frobenius(b, i as u32)).collect())
                .collect(),
        );
        let rhs: Vec<u32> = basis.iter().map(|&b| self.apply_inverse(b)).collect();
        moore.solve(base, &rhs).expect("Moore matrix of a basis is nonsingular")
    }
}

fn base_code(a: FieldElement) -> Result<u32> {
    if a.level != Level::Base {
        return Err(Error::LevelMismatch { expected: Level::Base, got: a.level });
    }
    Ok(a.code)
}

pub fn apply_additive(a: &AdditivePerm, u: FieldElement) -> Result<FieldElement> {
    Ok(FieldElement { level: Level::Base, code: a.apply(base_code(u)?) })
}

pub fn apply_additive_inverse(a: &AdditivePerm, u: FieldElement) -> Result<FieldElement> {
    Ok(FieldElement { level: Level::Base, code: a.apply_inverse(base_code(u)?) })
}
