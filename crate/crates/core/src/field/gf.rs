use crate::error::{Error, Result};

/// Largest field order for which dense log/exp tables are built.
pub const MAX_ORDER: u64 = 1 << 20;

/// Largest order for which a dense addition table is cached (odd p only).
const ADD_TABLE_MAX: u32 = 1024;

#[derive(Debug, Clone)]
enum AddRule {
    Xor,
    Table(Vec<u16>),
    Digits,
}

/// One level of a tower: a finite field of order `p^degree`, stored as
/// integer codes with table-driven arithmetic.
///
/// A code is the base-`p` digit string of the element's coefficients in the
/// power basis, so the subfield this level extends embeds as the codes
/// `0..sub_order` (the constant polynomials).
#[derive(Debug, Clone)]
pub struct Field {
    p: u32,
    degree: u32,
    order: u32,
    sub_order: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    add: AddRule,
}

impl Field {
    /// The prime field `F_p`.
    pub fn prime(p: u32) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NonPrimeP(p));
        }
        if u64::from(p) > MAX_ORDER {
            return Err(Error::FieldTooLarge(p.into()));
        }
        let mul = |a: u32, b: u32| ((u64::from(a) * u64::from(b)) % u64::from(p)) as u32;
        Self::assemble(p, 1, p, Vec::new(), mul)
    }

    /// The extension `sub[t] / modulus(t)`. The modulus is monic, given low
    /// degree first, with coefficients as codes of `sub`. Irreducibility is
    /// checked by the caller.
    pub fn extend(sub: &Field, modulus: &[u32]) -> Result<Field> {
        let d = modulus.len().saturating_sub(1) as u32;
        let order = u64::from(sub.order).checked_pow(d).unwrap_or(u64::MAX);
        if order > MAX_ORDER {
            return Err(Error::FieldTooLarge(order));
        }
        let order = order as u32;
        let q = sub.order;
        let modulus_owned = modulus.to_vec();
        let mul = |a: u32, b: u32| slow_mul(sub, &modulus_owned, d, q, a, b);
        let mut field = Self::assemble(sub.p, sub.degree * d, order, modulus.to_vec(), mul)?;
        field.sub_order = q;
        Ok(field)
    }

    fn assemble(
        p: u32,
        degree: u32,
        order: u32,
        modulus: Vec<u32>,
        mul: impl Fn(u32, u32) -> u32,
    ) -> Result<Field> {
        let group = order - 1;
        let (exp, log) = if group == 1 {
            (vec![1], vec![0, 0])
        } else {
            let mut found = None;
            for g in 2..order {
                let mut powers = Vec::with_capacity(group as usize);
                let mut x = 1u32;
                loop {
                    powers.push(x);
                    x = mul(x, g);
                    if x == 1 || powers.len() > group as usize {
                        break;
                    }
                }
                if powers.len() == group as usize {
                    found = Some(powers);
                    break;
                }
            }
            let exp = found.ok_or(Error::ReducibleModulus { level: "extension" })?;
            let mut log = vec![0u32; order as usize];
            for (i, &v) in exp.iter().enumerate() {
                log[v as usize] = i as u32;
            }
            (exp, log)
        };

        let mut field = Field {
            p,
            degree,
            order,
            sub_order: p,
            modulus,
            exp,
            log,
            neg: Vec::new(),
            add: AddRule::Digits,
        };
        field.neg = (0..order).map(|a| field.digit_map(a, |x| (p - x) % p)).collect();
        field.add = if p == 2 {
            AddRule::Xor
        } else if order <= ADD_TABLE_MAX {
            let n = order as usize;
            let mut table = vec![0u16; n * n];
            for a in 0..order {
                for b in a..order {
                    let s = field.add_digits(a, b) as u16;
                    table[a as usize * n + b as usize] = s;
                    table[b as usize * n + a as usize] = s;
                }
            }
            AddRule::Table(table)
        } else {
            AddRule::Digits
        };
        Ok(field)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    /// Degree over the prime field.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Order of the subfield this level was built over (`p` for the prime field).
    pub fn sub_order(&self) -> u32 {
        self.sub_order
    }

    /// Monic defining polynomial over the subfield, low degree first. Empty
    /// for the prime field.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn contains(&self, a: u32) -> bool {
        a < self.order
    }

    pub fn elements(&self) -> std::ops::Range<u32> {
        0..self.order
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        match &self.add {
            AddRule::Xor => a ^ b,
            AddRule::Table(t) => t[a as usize * self.order as usize + b as usize] as u32,
            AddRule::Digits => self.add_digits(a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let group = self.order - 1;
        let e = self.log[a as usize] + self.log[b as usize];
        self.exp[(if e >= group { e - group } else { e }) as usize]
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let group = self.order - 1;
        let l = self.log[a as usize];
        Some(self.exp[((group - l) % group) as usize])
    }

    /// `a / b`, `None` when `b = 0`.
    pub fn div(&self, a: u32, b: u32) -> Option<u32> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let group = u64::from(self.order - 1);
        let l = u64::from(self.log[a as usize]);
        self.exp[((l * (e % group)) % group) as usize]
    }

    /// `a^(p^j)`.
    pub fn frobenius(&self, a: u32, j: u32) -> u32 {
        if a == 0 {
            return 0;
        }
        let group = u64::from(self.order - 1);
        let e = mod_pow(u64::from(self.p), u64::from(j), group);
        let l = u64::from(self.log[a as usize]);
        self.exp[((l * e) % group) as usize]
    }

    /// Multiplicative generator used for the log tables.
    pub fn generator(&self) -> u32 {
        self.exp.get(1).copied().unwrap_or(1)
    }

    /// Discrete logarithm to the base [`Field::generator`]; `None` for zero.
    pub fn log(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.log[a as usize])
    }

    /// Base-`p` digits (coefficients over the prime field), least significant first.
    pub fn digits(&self, a: u32) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.degree as usize);
        let mut a = a;
        for _ in 0..self.degree {
            out.push(a % self.p);
            a /= self.p;
        }
        out
    }

    /// Coefficients over the subfield, least significant first.
    pub fn coeffs(&self, a: u32) -> Vec<u32> {
        let d = self.degree / self.sub_degree();
        let mut out = Vec::with_capacity(d as usize);
        let mut a = a;
        for _ in 0..d {
            out.push(a % self.sub_order);
            a /= self.sub_order;
        }
        out
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> u32 {
        coeffs.iter().rev().fold(0, |acc, &c| acc * self.sub_order + c)
    }

    fn sub_degree(&self) -> u32 {
        let mut d = 0;
        let mut s = 1u32;
        while s < self.sub_order {
            s *= self.p;
            d += 1;
        }
        d.max(1)
    }

    fn digit_map(&self, a: u32, f: impl Fn(u32) -> u32) -> u32 {
        let (mut a, mut out, mut place) = (a, 0u32, 1u32);
        for _ in 0..self.degree {
            out += f(a % self.p) * place;
            a /= self.p;
            place = place.wrapping_mul(self.p);
        }
        out
    }

    fn add_digits(&self, a: u32, b: u32) -> u32 {
        let p = self.p;
        let (mut a, mut b, mut out, mut place) = (a, b, 0u32, 1u32);
        for _ in 0..self.degree {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place = place.wrapping_mul(p);
        }
        out
    }
}

/// Schoolbook product of two elements of `sub[t]/modulus` given as codes.
fn slow_mul(sub: &Field, modulus: &[u32], d: u32, q: u32, a: u32, b: u32) -> u32 {
    let d = d as usize;
    let split = |mut x: u32| {
        let mut v = vec![0u32; d];
        for c in v.iter_mut() {
            *c = x % q;
            x /= q;
        }
        v
    };
    let (av, bv) = (split(a), split(b));
    let mut prod = vec![0u32; 2 * d];
    for (i, &x) in av.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in bv.iter().enumerate() {
            prod[i + j] = sub.add(prod[i + j], sub.mul(x, y));
        }
    }
    for top in (d..2 * d).rev() {
        let c = prod[top];
        if c == 0 {
            continue;
        }
        prod[top] = 0;
        for (j, &m) in modulus[..d].iter().enumerate() {
            let idx = top - d + j;
            prod[idx] = sub.sub(prod[idx], sub.mul(c, m));
        }
    }
    prod[..d].iter().rev().fold(0, |acc, &c| acc * q + c)
}

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn mod_pow(base: u64, exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let (mut result, mut base, mut exp) = (1u64, base % m, exp);
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    result
}
