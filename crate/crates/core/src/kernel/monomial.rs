use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Largest number of variables a ring may have.
pub const MAX_VARS: usize = 16;

/// A monomial `x^e` stored as a fixed exponent array; unused slots are zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: [u8; MAX_VARS],
    deg: u16,
}

impl Monomial {
    pub const ONE: Monomial = Monomial {
        exps: [0; MAX_VARS],
        deg: 0,
    };

    pub fn new(exps: &[u32]) -> Self {
        assert!(exps.len() <= MAX_VARS, "too many variables");
        let mut m = Monomial::ONE;
        for (i, &e) in exps.iter().enumerate() {
            assert!(e < 256, "exponent overflow");
            m.exps[i] = e as u8;
            m.deg += e as u16;
        }
        m
    }

    pub fn var(i: usize) -> Self {
        Self::var_pow(i, 1)
    }

    pub fn var_pow(i: usize, e: u32) -> Self {
        let mut m = Monomial::ONE;
        assert!(e < 256, "exponent overflow");
        m.exps[i] = e as u8;
        m.deg = e as u16;
        m
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.deg as u32
    }

    #[inline]
    pub fn exp(&self, i: usize) -> u32 {
        self.exps[i] as u32
    }

    pub fn exponents(&self, nvars: usize) -> Vec<u32> {
        self.exps[..nvars].iter().map(|&e| e as u32).collect()
    }

    #[inline]
    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut m = *self;
        for i in 0..MAX_VARS {
            let s = self.exps[i] as u16 + other.exps[i] as u16;
            assert!(s < 256, "exponent overflow");
            m.exps[i] = s as u8;
        }
        m.deg = self.deg + other.deg;
        m
    }

    #[inline]
    pub fn divides(&self, other: &Monomial) -> bool {
        if self.deg > other.deg {
            return false;
        }
        self.exps
            .iter()
            .zip(other.exps.iter())
            .all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    #[inline]
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        let mut m = *other;
        for i in 0..MAX_VARS {
            m.exps[i] = other.exps[i] - self.exps[i];
        }
        m.deg = other.deg - self.deg;
        m
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let mut m = Monomial::ONE;
        for i in 0..MAX_VARS {
            m.exps[i] = self.exps[i].max(other.exps[i]);
            m.deg += m.exps[i] as u16;
        }
        m
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut m = Monomial::ONE;
        for i in 0..MAX_VARS {
            m.exps[i] = self.exps[i].min(other.exps[i]);
            m.deg += m.exps[i] as u16;
        }
        m
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.exps
            .iter()
            .zip(other.exps.iter())
            .all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Bit `i` is set when variable `i` occurs.
    #[inline]
    pub fn support_mask(&self) -> u32 {
        let mut mask = 0u32;
        for (i, &e) in self.exps.iter().enumerate() {
            if e > 0 {
                mask |= 1 << i;
            }
        }
        mask
    }

    /// Remove all powers of variable `i`; returns the stripped monomial and the exponent.
    pub fn strip_var(&self, i: usize) -> (Monomial, u32) {
        let mut m = *self;
        let e = m.exps[i];
        m.exps[i] = 0;
        m.deg -= e as u16;
        (m, e as u32)
    }

    /// Move exponents through a variable map `new[map[i]] = old[i]`.
    pub fn permute(&self, map: &[usize]) -> Monomial {
        let mut m = Monomial::ONE;
        for (i, &j) in map.iter().enumerate() {
            m.exps[j] = self.exps[i];
        }
        m.deg = self.deg;
        m
    }

    pub fn degree_in(&self, vars: std::ops::Range<usize>) -> u32 {
        self.exps[vars].iter().map(|&e| e as u32).sum()
    }

    pub fn fmt_with(&self, nvars: usize, f: &mut impl fmt::Write) -> fmt::Result {
        let mut first = true;
        for i in 0..nvars {
            let e = self.exps[i];
            if e == 0 {
                continue;
            }
            if !first {
                f.write_char('*')?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{i}")?;
            } else {
                write!(f, "x{i}^{e}")?;
            }
        }
        if first {
            f.write_char('1')?;
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self
            .exps
            .iter()
            .rposition(|&e| e > 0)
            .map_or(0, |i| i + 1);
        self.fmt_with(n, f)
    }
}

/// Monomial orders used by the kernel.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum MonomialOrder {
    /// Graded reverse lexicographic, `x0 > x1 > ... > x{n-1}`.
    #[default]
    Grevlex,
    /// Pure lexicographic, `x0 > x1 > ...`.
    Lex,
    /// Block order: grevlex on the first `k` variables, then grevlex on the rest.
    /// Any monomial involving one of the first `k` variables is larger than
    /// every monomial free of them.
    Elimination(usize),
}

impl MonomialOrder {
    #[inline]
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match *self {
            MonomialOrder::Grevlex => grevlex(a, b, 0, MAX_VARS),
            MonomialOrder::Lex => a.exps.cmp(&b.exps),
            MonomialOrder::Elimination(k) => {
                let da = a.degree_in(0..k);
                let db = b.degree_in(0..k);
                da.cmp(&db)
                    .then_with(|| grevlex(a, b, 0, k))
                    .then_with(|| grevlex(a, b, k, MAX_VARS))
            }
        }
    }

    /// Whether the order refines total degree (so that leading terms of
    /// homogeneous polynomials behave as expected under degree truncation).
    pub fn is_graded(&self) -> bool {
        matches!(self, MonomialOrder::Grevlex)
    }
}

#[inline]
fn grevlex(a: &Monomial, b: &Monomial, lo: usize, hi: usize) -> Ordering {
    let da: u32 = a.exps[lo..hi].iter().map(|&e| e as u32).sum();
    let db: u32 = b.exps[lo..hi].iter().map(|&e| e as u32).sum();
    if da != db {
        return da.cmp(&db);
    }
    for i in (lo..hi).rev() {
        if a.exps[i] != b.exps[i] {
            return b.exps[i].cmp(&a.exps[i]);
        }
    }
    Ordering::Equal
}

/// All monomials of total degree `d` in `n` variables, in descending grevlex order.
pub fn monomials_of_degree(n: usize, d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut exps = vec![0u32; n];
    fn rec(i: usize, left: u32, exps: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        let n = exps.len();
        if i + 1 == n {
            exps[i] = left;
            out.push(Monomial::new(exps));
            return;
        }
        for e in (0..=left).rev() {
            exps[i] = e;
            rec(i + 1, left - e, exps, out);
        }
        exps[i] = 0;
    }
    if n == 0 {
        if d == 0 {
            out.push(Monomial::ONE);
        }
        return out;
    }
    rec(0, d, &mut exps, &mut out);
    out.sort_by(|a, b| MonomialOrder::Grevlex.cmp(b, a));
    out
}

/// Binomial coefficient with the convention `C(n, k) = 0` for `n < 0` or `k < 0`.
pub fn binomial(n: i64, k: i64) -> i64 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: i128 = 1;
    for i in 0..k {
        r = r * (n - i) as i128 / (i + 1) as i128;
    }
    r as i64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grevlex_basics() {
        let o = MonomialOrder::Grevlex;
        // x0*x2 < x1^2 in grevlex
        let a = Monomial::new(&[1, 0, 1]);
        let b = Monomial::new(&[0, 2, 0]);
        assert_eq!(o.cmp(&a, &b), Ordering::Less);
        assert_eq!(o.cmp(&Monomial::new(&[3]), &Monomial::new(&[0, 0, 0, 4])), Ordering::Less);
    }

    #[test]
    fn elimination_block() {
        let o = MonomialOrder::Elimination(1);
        let a = Monomial::new(&[1, 0, 0]);
        let b = Monomial::new(&[0, 5, 5]);
        assert_eq!(o.cmp(&a, &b), Ordering::Greater);
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials_of_degree(4, 3).len(), 20);
        assert_eq!(monomials_of_degree(3, 0).len(), 1);
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(-1, 2), 0);
    }
}
