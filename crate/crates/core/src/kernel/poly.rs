use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::field::Field;
use super::monomial::{Monomial, MonomialOrder, MAX_VARS};
use crate::error::{Error, Result};

/// A polynomial ring `F_p[x0, ..., x{n-1}]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Ring {
    pub nvars: usize,
    pub field: Field,
}

impl Ring {
    pub fn new(nvars: usize, field: Field) -> Self {
        assert!(nvars <= MAX_VARS, "at most {MAX_VARS} variables");
        Ring { nvars, field }
    }

    pub fn check_same(&self, other: &Ring) -> Result<()> {
        if self != other {
            return Err(Error::RingMismatch {
                left: self.nvars,
                right: other.nvars,
            });
        }
        Ok(())
    }

    /// `C(k + n - 1, n - 1)`: dimension of the degree-`k` piece.
    pub fn graded_dim(&self, k: i64) -> i64 {
        super::monomial::binomial(k + self.nvars as i64 - 1, self.nvars as i64 - 1)
    }
}

pub type Term = (Monomial, u32);

/// Sparse polynomial; terms are kept sorted strictly descending in `order`
/// and carry no zero coefficients.
#[derive(Clone)]
pub struct Polynomial {
    ring: Ring,
    order: MonomialOrder,
    terms: Vec<Term>,
}

impl Polynomial {
    pub fn zero(ring: Ring) -> Self {
        Polynomial {
            ring,
            order: MonomialOrder::Grevlex,
            terms: Vec::new(),
        }
    }

    pub fn constant(ring: Ring, c: u32) -> Self {
        Self::monomial(ring, c, Monomial::ONE)
    }

    pub fn one(ring: Ring) -> Self {
        Self::constant(ring, 1)
    }

    pub fn var(ring: Ring, i: usize) -> Self {
        assert!(i < ring.nvars);
        Self::monomial(ring, 1, Monomial::var(i))
    }

    pub fn monomial(ring: Ring, c: u32, m: Monomial) -> Self {
        let c = c % ring.field.modulus();
        let terms = if c == 0 { vec![] } else { vec![(m, c)] };
        Polynomial {
            ring,
            order: MonomialOrder::Grevlex,
            terms,
        }
    }

    /// Build from arbitrary (possibly repeated, unsorted) terms.
    pub fn from_terms(ring: Ring, order: MonomialOrder, terms: Vec<Term>) -> Self {
        let f = ring.field;
        let mut map: HashMap<Monomial, u32> = HashMap::with_capacity(terms.len());
        for (m, c) in terms {
            let e = map.entry(m).or_insert(0);
            *e = f.add(*e, c % f.modulus());
        }
        let mut terms: Vec<Term> = map.into_iter().filter(|(_, c)| *c != 0).collect();
        terms.sort_unstable_by(|a, b| order.cmp(&b.0, &a.0));
        Polynomial { ring, order, terms }
    }

    /// Build from a linear form given by its coefficient vector.
    pub fn linear(ring: Ring, coeffs: &[u32]) -> Self {
        let terms = coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| (Monomial::var(i), c))
            .collect();
        Self::from_terms(ring, MonomialOrder::Grevlex, terms)
    }

    /// Trusted constructor: `terms` already sorted descending in `order`, no zeros.
    pub(crate) fn from_sorted(ring: Ring, order: MonomialOrder, terms: Vec<Term>) -> Self {
        debug_assert!(terms
            .windows(2)
            .all(|w| order.cmp(&w[0].0, &w[1].0) == Ordering::Greater));
        debug_assert!(terms.iter().all(|t| t.1 != 0));
        Polynomial { ring, order, terms }
    }

    #[inline]
    pub fn ring(&self) -> Ring {
        self.ring
    }

    #[inline]
    pub fn field(&self) -> Field {
        self.ring.field
    }

    #[inline]
    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    #[inline]
    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub(crate) fn into_terms(self) -> Vec<Term> {
        self.terms
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead_monomial(&self) -> Option<Monomial> {
        self.terms.first().map(|t| t.0)
    }

    pub fn lead_coeff(&self) -> Option<u32> {
        self.terms.first().map(|t| t.1)
    }

    /// Largest total degree of a term; `None` for zero.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.0.degree()).max()
    }

    /// `Some(d)` when every term has degree `d`; the zero polynomial counts as homogeneous of degree 0.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let d = self.terms.first().map_or(0, |t| t.0.degree());
        self.terms.iter().all(|t| t.0.degree() == d).then_some(d)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.homogeneous_degree().is_some()
    }

    /// Re-sort the terms for a different monomial order.
    pub fn with_order(&self, order: MonomialOrder) -> Polynomial {
        if order == self.order {
            return self.clone();
        }
        let mut terms = self.terms.clone();
        terms.sort_unstable_by(|a, b| order.cmp(&b.0, &a.0));
        Polynomial {
            ring: self.ring,
            order,
            terms,
        }
    }

    pub fn coeff(&self, m: &Monomial) -> u32 {
        self.terms
            .iter()
            .find(|t| t.0 == *m)
            .map_or(0, |t| t.1)
    }

    pub fn scale(&self, c: u32) -> Polynomial {
        let f = self.field();
        let c = c % f.modulus();
        if c == 0 {
            return Polynomial {
                terms: vec![],
                ..*self
            };
        }
        Polynomial {
            terms: self.terms.iter().map(|&(m, a)| (m, f.mul(a, c))).collect(),
            ..*self
        }
    }

    pub fn monic(&self) -> Polynomial {
        match self.lead_coeff() {
            None | Some(1) => self.clone(),
            Some(c) => self.scale(self.field().inv(c)),
        }
    }

    /// `c * m * self`.
    pub fn mul_term(&self, c: u32, m: &Monomial) -> Polynomial {
        let f = self.field();
        if c.is_multiple_of(f.modulus()) {
            return Polynomial {
                terms: vec![],
                ..*self
            };
        }
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|&(t, a)| (t.mul(m), f.mul(a, c)))
                .collect(),
            ..*self
        }
    }

    /// `self + c * m * other`, merging in one pass.
    pub fn add_scaled(&self, c: u32, m: &Monomial, other: &Polynomial) -> Polynomial {
        debug_assert_eq!(self.ring, other.ring);
        let order = self.order;
        let f = self.field();
        let other = if other.order == order {
            std::borrow::Cow::Borrowed(other)
        } else {
            std::borrow::Cow::Owned(other.with_order(order))
        };
        let terms = merge_scaled(&self.terms, c, m, &other.terms, order, f);
        Polynomial {
            terms,
            ..*self
        }
    }

    pub fn mul_poly(&self, other: &Polynomial) -> Polynomial {
        debug_assert_eq!(self.ring, other.ring);
        if self.is_zero() || other.is_zero() {
            return Polynomial {
                terms: vec![],
                ..*self
            };
        }
        let f = self.field();
        let mut acc: HashMap<Monomial, u32> =
            HashMap::with_capacity(self.terms.len() * other.terms.len());
        for &(m1, c1) in &self.terms {
            for &(m2, c2) in &other.terms {
                let e = acc.entry(m1.mul(&m2)).or_insert(0);
                *e = f.add(*e, f.mul(c1, c2));
            }
        }
        let mut terms: Vec<Term> = acc.into_iter().filter(|t| t.1 != 0).collect();
        let order = self.order;
        terms.sort_unstable_by(|a, b| order.cmp(&b.0, &a.0));
        Polynomial {
            ring: self.ring,
            order,
            terms,
        }
    }

    /// `self / g` when `g` divides `self` exactly, else `None`.
    pub fn div_exact(&self, g: &Polynomial) -> Option<Polynomial> {
        assert!(!g.is_zero(), "division by zero polynomial");
        let order = self.order;
        let f = self.field();
        let g = g.with_order(order);
        let (glm, glc) = g.terms[0];
        let ginv = f.inv(glc);
        let mut r = self.terms.clone();
        let mut q: Vec<Term> = Vec::new();
        while let Some(&(m, c)) = r.first() {
            if !glm.divides(&m) {
                return None;
            }
            let qm = glm.quotient_of(&m);
            let qc = f.mul(c, ginv);
            q.push((qm, qc));
            r = merge_scaled(&r, f.neg(qc), &qm, &g.terms, order, f);
        }
        Some(Polynomial::from_sorted(self.ring, order, q))
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut r = Polynomial::one(self.ring).with_order(self.order);
        for _ in 0..e {
            r = r.mul_poly(self);
        }
        r
    }

    /// Partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> Polynomial {
        let f = self.field();
        let terms = self
            .terms
            .iter()
            .filter_map(|&(m, c)| {
                let e = m.exp(i);
                if e == 0 {
                    return None;
                }
                let c = f.mul(c, e % f.modulus());
                if c == 0 {
                    return None;
                }
                let mut ex = m.exponents(self.ring.nvars);
                ex[i] -= 1;
                Some((Monomial::new(&ex), c))
            })
            .collect();
        // derivative of a sorted polynomial is not necessarily sorted
        Polynomial::from_terms(self.ring, self.order, terms)
    }

    pub fn evaluate(&self, point: &[u32]) -> u32 {
        let f = self.field();
        let mut acc = 0u32;
        for &(m, c) in &self.terms {
            let mut v = c;
            for (i, &x) in point.iter().enumerate().take(self.ring.nvars) {
                let e = m.exp(i);
                if e > 0 {
                    v = f.mul(v, f.pow(x, e as u64));
                }
            }
            acc = f.add(acc, v);
        }
        acc
    }

    /// Substitute `x_i -> images[i]`; the result lives in the ring of the images.
    pub fn substitute(&self, images: &[Polynomial]) -> Polynomial {
        assert_eq!(images.len(), self.ring.nvars, "one image per variable");
        let target = images
            .first()
            .map(|p| p.ring)
            .expect("at least one variable");
        let mut cache: HashMap<(usize, u32), Polynomial> = HashMap::new();
        let mut acc: HashMap<Monomial, u32> = HashMap::new();
        let f = target.field;
        for &(m, c) in &self.terms {
            let mut prod = Polynomial::constant(target, c);
            for (i, img) in images.iter().enumerate() {
                let e = m.exp(i);
                if e == 0 {
                    continue;
                }
                let pw = cache
                    .entry((i, e))
                    .or_insert_with(|| img.pow(e))
                    .clone();
                prod = prod.mul_poly(&pw);
            }
            for &(tm, tc) in &prod.terms {
                let e = acc.entry(tm).or_insert(0);
                *e = f.add(*e, tc);
            }
        }
        Polynomial::from_terms(target, self.order, acc.into_iter().collect())
    }

    /// Rename variables into another ring: variable `i` becomes `map[i]`.
    pub fn map_vars(&self, target: Ring, map: &[usize]) -> Polynomial {
        assert_eq!(map.len(), self.ring.nvars);
        let terms = self.terms.iter().map(|&(m, c)| (m.permute(map), c)).collect();
        Polynomial::from_terms(target, self.order, terms)
    }

    /// Move into another ring: variable `offset + k` becomes `map[k]`. The
    /// first `offset` variables must not occur.
    pub fn map_vars_from(&self, target: Ring, map: &[usize], offset: usize) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .map(|&(m, c)| {
                let ex = m.exponents(self.ring.nvars);
                debug_assert!(ex[..offset].iter().all(|&e| e == 0));
                let mut out = vec![0u32; target.nvars];
                for (k, &e) in ex[offset..].iter().enumerate() {
                    out[map[k]] += e;
                }
                (Monomial::new(&out), c)
            })
            .collect();
        Polynomial::from_terms(target, self.order, terms)
    }

    /// Same polynomial viewed in a ring with more (trailing) variables.
    pub fn extend_ring(&self, target: Ring) -> Polynomial {
        assert!(target.nvars >= self.ring.nvars && target.field == self.ring.field);
        Polynomial {
            ring: target,
            order: self.order,
            terms: self.terms.clone(),
        }
        .with_order_forced(self.order)
    }

    fn with_order_forced(mut self, order: MonomialOrder) -> Polynomial {
        self.terms.sort_unstable_by(|a, b| order.cmp(&b.0, &a.0));
        self.order = order;
        self
    }

    /// Whether every term avoids the given variables.
    pub fn free_of(&self, vars: &[usize]) -> bool {
        self.terms
            .iter()
            .all(|t| vars.iter().all(|&v| t.0.exp(v) == 0))
    }

    /// Homogeneous component of degree `d`.
    pub fn component(&self, d: u32) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .filter(|t| t.0.degree() == d)
                .copied()
                .collect(),
            ..*self
        }
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        if self.ring != other.ring || self.terms.len() != other.terms.len() {
            return false;
        }
        if self.order == other.order {
            return self.terms == other.terms;
        }
        self.terms == other.with_order(self.order).terms
    }
}

impl Eq for Polynomial {}

/// `a + c*m*b` on sorted term slices.
pub(crate) fn merge_scaled(
    a: &[Term],
    c: u32,
    m: &Monomial,
    b: &[Term],
    order: MonomialOrder,
    f: Field,
) -> Vec<Term> {
    if c.is_multiple_of(f.modulus()) {
        return a.to_vec();
    }
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        let bm = b[j].0.mul(m);
        match order.cmp(&a[i].0, &bm) {
            Ordering::Greater => {
                out.push(a[i]);
                i += 1;
            }
            Ordering::Less => {
                out.push((bm, f.mul(c, b[j].1)));
                j += 1;
            }
            Ordering::Equal => {
                let s = f.add(a[i].1, f.mul(c, b[j].1));
                if s != 0 {
                    out.push((a[i].0, s));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    while j < b.len() {
        out.push((b[j].0.mul(m), f.mul(c, b[j].1)));
        j += 1;
    }
    out
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.add_scaled(1, &Monomial::ONE, rhs)
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.add_scaled(self.field().neg(1), &Monomial::ONE, rhs)
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.mul_poly(rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(self.field().neg(1))
    }
}

impl fmt::Display for Polynomial {
    /// Coefficients print as residues in `[0, p)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, &(m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            if m == Monomial::ONE {
                write!(f, "{c}")?;
            } else {
                if c != 1 {
                    write!(f, "{c}*")?;
                }
                m.fmt_with(self.ring.nvars, f)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fld = self.field();
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, &(m, c)) in self.terms.iter().enumerate() {
            let s = fld.signed(c);
            if k > 0 {
                f.write_str(if s < 0 { " - " } else { " + " })?;
            } else if s < 0 {
                f.write_str("-")?;
            }
            let a = s.unsigned_abs();
            if m == Monomial::ONE {
                write!(f, "{a}")?;
            } else {
                if a != 1 {
                    write!(f, "{a}*")?;
                }
                m.fmt_with(self.ring.nvars, f)?;
            }
        }
        Ok(())
    }
}

/// Parse a polynomial written with variables `x0..x{n-1}`, e.g. `3*x0^2*x1 + 5 - x2`.
pub fn parse_polynomial(ring: Ring, s: &str) -> Result<Polynomial> {
    let f = ring.field;
    let mut terms = Vec::new();
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Parse {
            line: 0,
            msg: "empty polynomial".into(),
        });
    }
    // split into signed chunks
    let mut chunks: Vec<(bool, String)> = Vec::new();
    let mut cur = String::new();
    let mut neg = false;
    for (i, ch) in s.chars().enumerate() {
        if (ch == '+' || ch == '-') && i > 0 && !cur.ends_with('^') {
            chunks.push((neg, std::mem::take(&mut cur)));
            neg = ch == '-';
        } else if (ch == '+' || ch == '-') && i == 0 {
            neg = ch == '-';
        } else {
            cur.push(ch);
        }
    }
    chunks.push((neg, cur));
    for (neg, chunk) in chunks {
        if chunk.is_empty() {
            return Err(Error::Parse {
                line: 0,
                msg: format!("dangling sign in '{s}'"),
            });
        }
        let mut coeff = 1u32;
        let mut exps = vec![0u32; ring.nvars];
        for factor in chunk.split('*') {
            if let Some(rest) = factor.strip_prefix('x') {
                let (idx, e) = match rest.split_once('^') {
                    Some((i, e)) => (i, e),
                    None => (rest, "1"),
                };
                let idx: usize = idx.parse().map_err(|_| Error::Parse {
                    line: 0,
                    msg: format!("bad variable '{factor}'"),
                })?;
                let e: u32 = e.parse().map_err(|_| Error::Parse {
                    line: 0,
                    msg: format!("bad exponent '{factor}'"),
                })?;
                if idx >= ring.nvars {
                    return Err(Error::Parse {
                        line: 0,
                        msg: format!("variable x{idx} outside ring of {} vars", ring.nvars),
                    });
                }
                exps[idx] += e;
            } else {
                let v: u64 = factor.parse().map_err(|_| Error::Parse {
                    line: 0,
                    msg: format!("bad coefficient '{factor}'"),
                })?;
                coeff = f.mul(coeff, (v % f.modulus() as u64) as u32);
            }
        }
        if neg {
            coeff = f.neg(coeff);
        }
        terms.push((Monomial::new(&exps), coeff));
    }
    Ok(Polynomial::from_terms(ring, MonomialOrder::Grevlex, terms))
}
