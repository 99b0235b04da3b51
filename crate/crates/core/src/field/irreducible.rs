//! Brute-force irreducibility over a (small) coefficient field and the
//! canonical modulus choice.

use super::gf::Field;

/// Remainder of `num` modulo the monic `den`, both low degree first.
fn rem_monic(field: &Field, num: &[u32], den: &[u32]) -> Vec<u32> {
    let mut r = num.to_vec();
    let d = den.len() - 1;
    while r.len() > d {
        let c = *r.last().unwrap();
        let shift = r.len() - 1 - d;
        if c != 0 {
            for (j, &m) in den.iter().enumerate() {
                r[shift + j] = field.sub(r[shift + j], field.mul(c, m));
            }
        }
        r.pop();
    }
    r
}

/// Whether the monic polynomial `poly` (low degree first, coefficients in
/// `field`) is irreducible, by ruling out every monic factor of degree at
/// most half its degree.
pub fn is_irreducible(field: &Field, poly: &[u32]) -> bool {
    let d = poly.len().saturating_sub(1);
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    // roots first: cheap and catches most reducible candidates
    for x in field.elements() {
        let v = poly
            .iter()
            .rev()
            .fold(0, |acc, &c| field.add(field.mul(acc, x), c));
        if v == 0 {
            return false;
        }
    }
    let q = u64::from(field.order());
    for deg in 2..=d / 2 {
        let count = q.pow(deg as u32);
        let mut cand = vec![0u32; deg + 1];
        cand[deg] = 1;
        for idx in 0..count {
            let mut x = idx;
            for c in cand[..deg].iter_mut() {
                *c = (x % q) as u32;
                x /= q;
            }
            if rem_monic(field, poly, &cand).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// The smallest monic irreducible polynomial of degree `d` over `field`,
/// ordering candidates by the integer `c0 + c1*q + ... + c_{d-1}*q^(d-1)`
/// (so `t^3 + t + 1` precedes `t^3 + t^2 + 1` over `F_2`).
pub fn smallest_irreducible(field: &Field, d: usize) -> Vec<u32> {
    let q = u64::from(field.order());
    let count = q.pow(d as u32);
    let mut poly = vec![0u32; d + 1];
    poly[d] = 1;
    for idx in 0..count {
        let mut x = idx;
        for c in poly[..d].iter_mut() {
            *c = (x % q) as u32;
            x /= q;
        }
        if d >= 2 && poly[0] == 0 {
            continue;
        }
        if is_irreducible(field, &poly) {
            return poly;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}
