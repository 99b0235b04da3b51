use crate::error::{Error, Result};
use crate::field::{FieldTower, Level};

use super::poly::{interpolate, Poly};

/// A total map between two tower levels, stored as a dense table of output
/// codes indexed by input code. A polynomial form may be attached; when it
/// is, it agrees with the table everywhere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldFn {
    dom: Level,
    cod: Level,
    table: Vec<u32>,
    poly: Option<Poly>,
}

impl FieldFn {
    pub fn from_table(tower: &FieldTower, dom: Level, cod: Level, table: Vec<u32>) -> Result<FieldFn> {
        let expected = tower.field(dom).order() as usize;
        if table.len() != expected {
            return Err(Error::TableLength { expected, got: table.len() });
        }
        let order = tower.field(cod).order();
        if let Some(&code) = table.iter().find(|&&v| v >= order) {
            return Err(Error::CodeOutOfRange { level: cod, code, order });
        }
        Ok(FieldFn { dom, cod, table, poly: None })
    }

    /// Tabulates `f` over the domain. Outputs are trusted to be valid codes.
    pub fn from_fn(tower: &FieldTower, dom: Level, cod: Level, f: impl FnMut(u32) -> u32) -> FieldFn {
        let table: Vec<u32> = tower.field(dom).elements().map(f).collect();
        debug_assert!(table.iter().all(|&v| tower.field(cod).contains(v)));
        FieldFn { dom, cod, table, poly: None }
    }

    pub fn from_poly(tower: &FieldTower, poly: Poly) -> FieldFn {
        let level = poly.level();
        let field = tower.field(level);
        let table = field.elements().map(|a| poly.eval_code(field, a)).collect();
        FieldFn { dom: level, cod: level, table, poly: Some(poly) }
    }

    pub fn identity(tower: &FieldTower, level: Level) -> FieldFn {
        FieldFn::from_poly(tower, Poly::monomial(level, 1, 1))
    }

    pub fn constant(tower: &FieldTower, dom: Level, cod: Level, c: u32) -> FieldFn {
        FieldFn::from_fn(tower, dom, cod, |_| c)
    }

    pub fn dom(&self) -> Level {
        self.dom
    }

    pub fn cod(&self) -> Level {
        self.cod
    }

    #[inline]
    pub fn apply(&self, x: u32) -> u32 {
        self.table[x as usize]
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    pub fn poly(&self) -> Option<&Poly> {
        self.poly.as_ref()
    }

    /// Attaches the reduced interpolating polynomial over the domain field.
    /// Codomain codes are read as domain codes, so this requires the
    /// codomain to sit inside the domain.
    pub fn with_poly(mut self, tower: &FieldTower) -> FieldFn {
        let graph: Vec<(u32, u32)> = self.table.iter().enumerate().map(|(x, &y)| (x as u32, y)).collect();
        let poly = interpolate(tower.field(self.dom), self.dom, &graph).expect("table abscissae are distinct");
        self.poly = Some(poly);
        self
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &FieldFn) -> Result<FieldFn> {
        if inner.cod != self.dom {
            return Err(Error::LevelMismatch { expected: self.dom, got: inner.cod });
        }
        Ok(FieldFn {
            dom: inner.dom,
            cod: self.cod,
            table: inner.table.iter().map(|&y| self.table[y as usize]).collect(),
            poly: None,
        })
    }

    pub fn is_square(&self) -> bool {
        self.dom == self.cod
    }

    /// Seen-set sweep: the first pair of inputs with equal outputs, if any.
    pub fn collision(&self) -> Option<(u32, u32)> {
        let mut first_seen = vec![u32::MAX; self.table.len()];
        for (x, &y) in self.table.iter().enumerate() {
            let slot = &mut first_seen[y as usize];
            if *slot != u32::MAX {
                return Some((*slot, x as u32));
            }
            *slot = x as u32;
        }
        None
    }

    /// Whether this square map is a bijection.
    pub fn is_permutation(&self) -> bool {
        self.is_square() && self.collision().is_none()
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && self.table.iter().enumerate().all(|(x, &y)| x as u32 == y)
    }

    /// The table inverse of a permutation, without a polynomial form.
    pub fn inverse_table(&self) -> Result<FieldFn> {
        if !self.is_square() {
            return Err(Error::LevelMismatch { expected: self.dom, got: self.cod });
        }
        if let Some((a, b)) = self.collision() {
            return Err(Error::NotAPermutation(a, b));
        }
        let mut inv = vec![0u32; self.table.len()];
        for (x, &y) in self.table.iter().enumerate() {
            inv[y as usize] = x as u32;
        }
        Ok(FieldFn { dom: self.cod, cod: self.dom, table: inv, poly: None })
    }

    /// Compositional inverse with its reduced polynomial form attached.
    pub fn comp_inverse(&self, tower: &FieldTower) -> Result<FieldFn> {
        Ok(self.inverse_table()?.with_poly(tower))
    }

    /// Distinct output codes, ascending.
    pub fn image(&self) -> Vec<u32> {
        let mut img = self.table.clone();
        img.sort_unstable();
        img.dedup();
        img
    }

    pub fn is_surjective(&self, tower: &FieldTower) -> bool {
        self.image().len() == tower.field(self.cod).order() as usize
    }

    /// Whether `self ∘ other` and `other ∘ self` are both the identity.
    pub fn inverts(&self, other: &FieldFn) -> bool {
        let forward = other.table.iter().enumerate().all(|(x, &y)| self.table[y as usize] == x as u32);
        let backward = self.table.iter().enumerate().all(|(x, &y)| other.table[y as usize] == x as u32);
        self.table.len() == other.table.len() && forward && backward
    }
}
