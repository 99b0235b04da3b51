//! JSON shapes written by the command line tool.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::constructions::Theorem;
use crate::error::Error;
use crate::field::Level;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementRow {
    pub level: Level,
    pub code: u32,
    pub coeffs: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldReport {
    pub field: String,
    pub p: u32,
    pub k: u32,
    pub n: u32,
    pub q: u32,
    pub size: u32,
    pub modulus_q: Vec<u32>,
    pub modulus_qn: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elements: Option<Vec<ElementRow>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pair {
    pub gamma: u32,
    pub b: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub field: String,
    pub pairs: Vec<Pair>,
    pub subspace_closed: bool,
    pub b_additive: bool,
    pub f_surjective: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub x: u32,
    pub u: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub field: String,
    pub gamma: u32,
    pub b: u32,
    pub verified: bool,
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructReport {
    pub field: String,
    pub theorem: Theorem,
    pub predicted_permutation: bool,
    pub reason: String,
    pub oracle_permutation: bool,
    pub agree: bool,
    pub collision: Option<[u32; 2]>,
    pub inverse_ok: Option<bool>,
    pub involution: Option<bool>,
    pub rank: Option<usize>,
    pub cross_checks: BTreeMap<String, bool>,
    pub table: Vec<u32>,
    pub inverse_table: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polynomial: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BentReport {
    pub field: String,
    pub gammas: [u32; 3],
    pub b: u32,
    pub bent: bool,
    pub dual_matches: bool,
    pub parseval: bool,
    pub phi_permutations: [bool; 3],
    pub psi_permutation: bool,
    pub psi_inverse_is_sum: bool,
    pub h_hex: String,
    pub dual_hex: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub kind: String,
    pub message: String,
    pub position: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub error: ErrorBody,
}

impl From<&Error> for ErrorReport {
    fn from(e: &Error) -> ErrorReport {
        let debug = format!("{e:?}");
        let kind = debug.split(['(', ' ', '{']).next().unwrap_or("Error").to_string();
        let position = match e {
            Error::Parse { position, .. } => Some(*position),
            _ => None,
        };
        ErrorReport { error: ErrorBody { kind, message: e.to_string(), position } }
    }
}
