//! Homogeneous ideals with cached Gröbner bases, and the ideal calculus built
//! on them: sums, products, intersections, colons, saturations, elimination
//! and Jacobian ideals.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU8, Ordering as AtomicOrdering};
use std::sync::{Arc, RwLock};

use super::groebner::{groebner_basis, GroebnerBasis, DEFAULT_PAIR_BUDGET};
use super::linalg::Matrix;
use super::monomial::{monomials_of_degree, Monomial, MonomialOrder};
use super::poly::{parse_polynomial, Polynomial, Ring};
use super::random::{random_invertible, random_vector, seeded_rng};
use crate::error::{Error, Result};

/// Whether an ideal is known to be saturated with respect to the irrelevant ideal.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Saturation {
    Yes,
    No,
    Unknown,
}

impl Saturation {
    fn to_u8(self) -> u8 {
        match self {
            Saturation::Unknown => 0,
            Saturation::Yes => 1,
            Saturation::No => 2,
        }
    }

    fn from_u8(v: u8) -> Self {
        match v {
            1 => Saturation::Yes,
            2 => Saturation::No,
            _ => Saturation::Unknown,
        }
    }
}

/// An ideal of `F_p[x0..x{n-1}]` generated by homogeneous polynomials.
///
/// Gröbner bases are cached per monomial order behind a lock, so a shared
/// ideal can be queried from several threads.
pub struct HomogeneousIdeal {
    ring: Ring,
    gens: Vec<Polynomial>,
    cache: RwLock<HashMap<MonomialOrder, Arc<GroebnerBasis>>>,
    saturated: AtomicU8,
    budget: usize,
}

impl Clone for HomogeneousIdeal {
    fn clone(&self) -> Self {
        HomogeneousIdeal {
            ring: self.ring,
            gens: self.gens.clone(),
            cache: RwLock::new(self.cache.read().unwrap().clone()),
            saturated: AtomicU8::new(self.saturated.load(AtomicOrdering::Relaxed)),
            budget: self.budget,
        }
    }
}

impl std::fmt::Debug for HomogeneousIdeal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HomogeneousIdeal")
            .field("nvars", &self.ring.nvars)
            .field("gens", &self.gens)
            .finish()
    }
}

impl HomogeneousIdeal {
    pub fn new(ring: Ring, gens: Vec<Polynomial>) -> Result<Self> {
        let mut kept = Vec::with_capacity(gens.len());
        for g in gens {
            ring.check_same(&g.ring())?;
            if g.is_zero() {
                continue;
            }
            if !g.is_homogeneous() {
                return Err(Error::InvalidArgument(format!("inhomogeneous generator {g}")));
            }
            let g = g.with_order(MonomialOrder::Grevlex);
            if !kept.contains(&g) {
                kept.push(g);
            }
        }
        Ok(HomogeneousIdeal {
            ring,
            gens: kept,
            cache: RwLock::new(HashMap::new()),
            saturated: AtomicU8::new(0),
            budget: DEFAULT_PAIR_BUDGET,
        })
    }

    pub fn parse(ring: Ring, gens: &[&str]) -> Result<Self> {
        let polys = gens
            .iter()
            .map(|s| parse_polynomial(ring, s))
            .collect::<Result<Vec<_>>>()?;
        Self::new(ring, polys)
    }

    pub fn zero(ring: Ring) -> Self {
        Self::new(ring, vec![]).expect("empty ideal")
    }

    pub fn unit(ring: Ring) -> Self {
        Self::new(ring, vec![Polynomial::one(ring)]).expect("unit ideal")
    }

    /// The irrelevant ideal `(x0, ..., x{n-1})`.
    pub fn irrelevant(ring: Ring) -> Self {
        let gens = (0..ring.nvars).map(|i| Polynomial::var(ring, i)).collect();
        Self::new(ring, gens).expect("variables are homogeneous")
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn nvars(&self) -> usize {
        self.ring.nvars
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.gens
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    /// Set the S-pair budget used by every Gröbner computation on this ideal
    /// and on ideals derived from it.
    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    fn derived(&self, gens: Vec<Polynomial>) -> Result<Self> {
        Ok(Self::new(self.ring, gens)?.with_budget(self.budget))
    }

    pub fn saturation_flag(&self) -> Saturation {
        Saturation::from_u8(self.saturated.load(AtomicOrdering::Relaxed))
    }

    pub fn set_saturation_flag(&self, s: Saturation) {
        self.saturated.store(s.to_u8(), AtomicOrdering::Relaxed);
    }

    /// Reduced Gröbner basis for `order`, computed once and cached.
    pub fn groebner(&self, order: MonomialOrder) -> Result<Arc<GroebnerBasis>> {
        if let Some(gb) = self.cache.read().unwrap().get(&order) {
            return Ok(gb.clone());
        }
        let gb = Arc::new(groebner_basis(self.ring, &self.gens, order, self.budget)?);
        let mut w = self.cache.write().unwrap();
        Ok(w.entry(order).or_insert(gb).clone())
    }

    /// Grevlex Gröbner basis.
    pub fn gb(&self) -> Result<Arc<GroebnerBasis>> {
        self.groebner(MonomialOrder::Grevlex)
    }

    pub fn is_unit(&self) -> Result<bool> {
        Ok(self.gb()?.is_unit())
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn contains(&self, f: &Polynomial) -> Result<bool> {
        self.ring.check_same(&f.ring())?;
        Ok(self.gb()?.contains(f))
    }

    pub fn contains_ideal(&self, other: &HomogeneousIdeal) -> Result<bool> {
        self.ring.check_same(&other.ring)?;
        let gb = self.gb()?;
        Ok(other.gens.iter().all(|g| gb.contains(g)))
    }

    /// Ideal equality via reduced grevlex bases.
    pub fn same_ideal(&self, other: &HomogeneousIdeal) -> Result<bool> {
        self.ring.check_same(&other.ring)?;
        Ok(self.gb()?.elements() == other.gb()?.elements())
    }

    pub fn normal_form(&self, f: &Polynomial) -> Result<Polynomial> {
        self.ring.check_same(&f.ring())?;
        Ok(self.gb()?.normal_form(f))
    }

    pub fn sum(&self, other: &HomogeneousIdeal) -> Result<Self> {
        self.ring.check_same(&other.ring)?;
        let mut g = self.gens.clone();
        g.extend(other.gens.iter().cloned());
        self.derived(g)
    }

    pub fn add_generators(&self, extra: &[Polynomial]) -> Result<Self> {
        let mut g = self.gens.clone();
        g.extend(extra.iter().cloned());
        self.derived(g)
    }

    pub fn product(&self, other: &HomogeneousIdeal) -> Result<Self> {
        self.ring.check_same(&other.ring)?;
        let mut g = Vec::with_capacity(self.gens.len() * other.gens.len());
        for a in &self.gens {
            for b in &other.gens {
                g.push(a * b);
            }
        }
        self.derived(g)
    }

    pub fn power(&self, k: u32) -> Result<Self> {
        let mut acc = Self::unit(self.ring).with_budget(self.budget);
        for _ in 0..k {
            acc = acc.product(self)?;
        }
        Ok(acc)
    }

    /// A basis of the degree-`k` graded piece, one element per monomial of
    /// the lead-term ideal in degree `k` (the element is `m - NF(m)`).
    pub fn degree_part(&self, k: u32) -> Result<Vec<Polynomial>> {
        let gb = self.gb()?;
        let leads = gb.lead_monomials();
        let mut out = Vec::new();
        for m in monomials_of_degree(self.ring.nvars, k) {
            if leads.iter().any(|l| l.divides(&m)) {
                let mono = Polynomial::monomial(self.ring, 1, m);
                out.push(&mono - &gb.normal_form(&mono));
            }
        }
        Ok(out)
    }

    /// `I ∩ J`, by eliminating `t` from `t·I + (1 − t)·J`.
    pub fn intersect(&self, other: &HomogeneousIdeal) -> Result<Self> {
        self.ring.check_same(&other.ring)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.ring).with_budget(self.budget));
        }
        if self.is_unit()? {
            return Ok(other.clone().with_budget(self.budget));
        }
        if other.is_unit()? {
            return Ok(self.clone());
        }
        let n = self.ring.nvars;
        let big = Ring::new(n + 1, self.ring.field);
        let shift: Vec<usize> = (1..=n).collect();
        let t = Polynomial::var(big, 0);
        let one_minus_t = &Polynomial::one(big) - &t;
        let mut gens = Vec::new();
        for g in &self.gens {
            gens.push(&t * &g.map_vars(big, &shift));
        }
        for g in &other.gens {
            gens.push(&one_minus_t * &g.map_vars(big, &shift));
        }
        let gb = groebner_basis(big, &gens, MonomialOrder::Elimination(1), self.budget)?;
        let ident: Vec<usize> = (0..n).collect();
        let kept: Vec<Polynomial> = gb
            .elements()
            .iter()
            .filter(|p| p.free_of(&[0]))
            .map(|p| p.map_vars_from(self.ring, &ident, 1))
            .collect();
        self.derived(kept)
    }

    /// `I : f`, computed as `(I ∩ ⟨f⟩) / f`.
    pub fn colon_element(&self, f: &Polynomial) -> Result<Self> {
        self.ring.check_same(&f.ring())?;
        if f.is_zero() || self.contains(f)? {
            return Ok(Self::unit(self.ring).with_budget(self.budget));
        }
        let principal = self.derived(vec![f.clone()])?;
        let inter = self.intersect(&principal)?;
        let gens = inter
            .gens
            .iter()
            .map(|g| {
                g.div_exact(f)
                    .expect("generator of I ∩ (f) is divisible by f")
            })
            .collect();
        self.derived(gens)
    }

    /// `I : J = ⋂_g (I : g)` over the generators `g` of `J`.
    pub fn colon(&self, other: &HomogeneousIdeal) -> Result<Self> {
        self.ring.check_same(&other.ring)?;
        let mut acc: Option<Self> = None;
        for g in &other.gens {
            if self.contains(g)? {
                continue;
            }
            let c = self.colon_element(g)?;
            acc = Some(match acc {
                None => c,
                Some(a) => a.intersect(&c)?,
            });
        }
        Ok(acc.unwrap_or_else(|| Self::unit(self.ring).with_budget(self.budget)))
    }

    /// `I : ℓ^∞` for a linear form `ℓ`. After a change of coordinates making
    /// `ℓ` the last variable, the grevlex basis of the saturation is obtained
    /// by stripping powers of that variable from the grevlex basis of `I`.
    pub fn saturate_linear(&self, l: &Polynomial) -> Result<Self> {
        self.ring.check_same(&l.ring())?;
        if l.homogeneous_degree() != Some(1) || l.is_zero() {
            return Err(Error::InvalidArgument(format!("not a linear form: {l}")));
        }
        let n = self.ring.nvars;
        let field = self.ring.field;
        let coeffs: Vec<u32> = (0..n).map(|i| l.coeff(&Monomial::var(i))).collect();
        // N has last row = ℓ, so y = N x makes y_{n-1} = ℓ(x)
        let mut rng = seeded_rng(n as u64, "saturate-linear-frame");
        let nmat = loop {
            let mut m = random_invertible(field, n, &mut rng);
            for (j, &c) in coeffs.iter().enumerate() {
                m.set(n - 1, j, c);
            }
            if m.determinant() != 0 {
                break m;
            }
        };
        let mmat = nmat.inverse().expect("invertible frame");
        let moved = self.linear_change(&mmat)?;
        let gb = moved.gb()?;
        let last = n - 1;
        let stripped: Vec<Polynomial> = gb
            .elements()
            .iter()
            .map(|p| strip_variable(p, last))
            .collect();
        let sat_moved = moved.derived(stripped)?;
        sat_moved.linear_change(&nmat)
    }

    /// Saturation with respect to the irrelevant ideal, via `I : ℓ^∞` for
    /// seeded random linear forms `ℓ`; two independent forms must agree.
    pub fn saturate_irrelevant(&self) -> Result<Self> {
        if self.saturation_flag() == Saturation::Yes {
            return Ok(self.clone());
        }
        if self.is_zero() {
            let z = self.clone();
            z.set_saturation_flag(Saturation::Yes);
            return Ok(z);
        }
        let n = self.ring.nvars;
        let field = self.ring.field;
        let mut results: Vec<Self> = Vec::new();
        for attempt in 0..6u64 {
            let mut rng = seeded_rng(attempt, "saturate-irrelevant");
            let l = Polynomial::linear(self.ring, &random_vector(field, n, &mut rng));
            if l.is_zero() {
                continue;
            }
            let cand = self.saturate_linear(&l)?;
            for prev in &results {
                if prev.same_ideal(&cand)? {
                    let flag = if self.same_ideal(&cand)? {
                        Saturation::Yes
                    } else {
                        Saturation::No
                    };
                    self.set_saturation_flag(flag);
                    cand.set_saturation_flag(Saturation::Yes);
                    return Ok(cand);
                }
            }
            results.push(cand);
        }
        Err(Error::RetriesExhausted {
            what: "saturation".into(),
            attempts: 6,
        })
    }

    /// Whether `J` has the same radical as the irrelevant ideal, checked by
    /// asking for a pure power of every variable among the lead terms.
    fn is_irrelevant_primary(&self) -> Result<bool> {
        let leads = self.gb()?.lead_monomials();
        Ok((0..self.ring.nvars).all(|i| {
            leads
                .iter()
                .any(|m| m.degree() == m.exp(i) && m.exp(i) > 0)
        }))
    }

    /// `I : J^∞`.
    pub fn saturate(&self, j: &HomogeneousIdeal) -> Result<Self> {
        self.ring.check_same(&j.ring)?;
        if j.is_irrelevant_primary()? {
            return self.saturate_irrelevant();
        }
        if j.gens.len() == 1 {
            return self.saturate_element(&j.gens[0]);
        }
        let mut cur = self.clone();
        loop {
            let next = cur.colon(j)?;
            if next.same_ideal(&cur)? {
                return Ok(next);
            }
            cur = next;
        }
    }

    /// `I : f^∞`; exact one-shot for linear `f`, iterated colons otherwise.
    pub fn saturate_element(&self, f: &Polynomial) -> Result<Self> {
        if f.homogeneous_degree() == Some(1) {
            return self.saturate_linear(f);
        }
        let mut cur = self.clone();
        loop {
            let next = cur.colon_element(f)?;
            if next.same_ideal(&cur)? {
                return Ok(next);
            }
            cur = next;
        }
    }

    /// Intersection of the primary components of codimension `codim`, as
    /// `C : (C : I)` for a seeded complete intersection `C ⊆ I` of `codim`
    /// general forms of the top generator degree.
    pub fn top_dimensional(&self, codim: usize, seed: u64) -> Result<Self> {
        let top = self
            .gens
            .iter()
            .filter_map(|g| g.homogeneous_degree())
            .max()
            .ok_or_else(|| Error::InvalidArgument("zero ideal".into()))?;
        let part = self.degree_part(top)?;
        let mut rng = seeded_rng(seed, "top-dimensional");
        for _ in 0..6 {
            let forms: Vec<Polynomial> = (0..codim)
                .map(|_| {
                    let c = random_vector(self.ring.field, part.len(), &mut rng);
                    part.iter().zip(c).fold(Polynomial::zero(self.ring), |acc, (p, c)| {
                        acc.add_scaled(c, &Monomial::ONE, p)
                    })
                })
                .collect();
            let ci = self.derived(forms)?;
            let lead = ci.gb()?.lead_monomials();
            let num = crate::invariants::hilbert_numerator(&lead);
            let data = crate::invariants::HilbertData::from_numerator(self.ring.nvars, num);
            if data.dim != self.ring.nvars as i64 - 1 - codim as i64 || data.degree != (top as i64).pow(codim as u32) {
                continue;
            }
            return ci.colon(&ci.colon(self)?);
        }
        Err(Error::RetriesExhausted {
            what: "complete intersection inside the ideal".into(),
            attempts: 6,
        })
    }

    /// `I ∩ F_p[remaining variables]`, re-expressed in the smaller ring with
    /// the remaining variables kept in their original relative order.
    pub fn eliminate(&self, drop: &[usize]) -> Result<Self> {
        let n = self.ring.nvars;
        if drop.is_empty() {
            return Ok(self.clone());
        }
        let mut perm: Vec<usize> = vec![0; n];
        let keep: Vec<usize> = (0..n).filter(|i| !drop.contains(i)).collect();
        for (k, &d) in drop.iter().enumerate() {
            perm[d] = k;
        }
        for (k, &i) in keep.iter().enumerate() {
            perm[i] = drop.len() + k;
        }
        let moved: Vec<Polynomial> = self.gens.iter().map(|g| g.map_vars(self.ring, &perm)).collect();
        let k = drop.len();
        let gb = groebner_basis(self.ring, &moved, MonomialOrder::Elimination(k), self.budget)?;
        let small = Ring::new(n - k, self.ring.field);
        let dropped: Vec<usize> = (0..k).collect();
        let ident: Vec<usize> = (0..n - k).collect();
        let kept = gb
            .elements()
            .iter()
            .filter(|p| p.free_of(&dropped))
            .map(|p| p.map_vars_from(small, &ident, k))
            .collect();
        Ok(Self::new(small, kept)?.with_budget(self.budget))
    }

    /// `I + (c×c minors of the Jacobian matrix of the generators)`, with `c`
    /// the number of generators (hypersurfaces and complete intersections).
    pub fn jacobian_ideal(&self) -> Result<Self> {
        self.jacobian_ideal_codim(self.gens.len())
    }

    /// `I + (c×c minors of the Jacobian matrix of all generators)`.
    pub fn jacobian_ideal_codim(&self, c: usize) -> Result<Self> {
        let n = self.ring.nvars;
        if c == 0 || c > self.gens.len() || c > n {
            return Err(Error::InvalidArgument(format!(
                "minor size {c} incompatible with {} generators in {n} variables",
                self.gens.len()
            )));
        }
        let jac: Vec<Vec<Polynomial>> = self
            .gens
            .iter()
            .map(|g| (0..n).map(|i| g.derivative(i)).collect())
            .collect();
        let mut minors = Vec::new();
        for rows in subsets(self.gens.len(), c) {
            for cols in subsets(n, c) {
                let sub: Vec<Vec<Polynomial>> = rows
                    .iter()
                    .map(|&r| cols.iter().map(|&col| jac[r][col].clone()).collect())
                    .collect();
                let d = poly_determinant(&sub);
                if !d.is_zero() {
                    minors.push(d);
                }
            }
        }
        self.add_generators(&minors)
    }

    /// Apply the substitution `x_i -> Σ_j M[i][j] x_j` to every generator.
    pub fn linear_change(&self, m: &Matrix) -> Result<Self> {
        let n = self.ring.nvars;
        if m.rows() != n || m.cols() != n {
            return Err(Error::InvalidArgument("matrix size does not match ring".into()));
        }
        let images: Vec<Polynomial> = (0..n)
            .map(|i| Polynomial::linear(self.ring, m.row(i)))
            .collect();
        let gens = self.gens.iter().map(|g| g.substitute(&images)).collect();
        let out = self.derived(gens)?;
        out.set_saturation_flag(self.saturation_flag());
        Ok(out)
    }

    /// Seeded random invertible linear change of coordinates; returns the
    /// transformed ideal and the matrix used.
    pub fn generic_coordinate_change(&self, seed: u64) -> Result<(Self, Matrix)> {
        let mut rng = seeded_rng(seed, "coordinate-change");
        let m = random_invertible(self.ring.field, self.ring.nvars, &mut rng);
        Ok((self.linear_change(&m)?, m))
    }

    /// Pull back along a ring map `x_i -> images[i]` into the ring of the images.
    pub fn substitute(&self, images: &[Polynomial]) -> Result<Self> {
        if images.len() != self.ring.nvars {
            return Err(Error::InvalidArgument("one image per variable required".into()));
        }
        let target = images[0].ring();
        let gens: Vec<Polynomial> = self.gens.iter().map(|g| g.substitute(images)).collect();
        Ok(Self::new(target, gens)?.with_budget(self.budget))
    }
}

fn strip_variable(p: &Polynomial, v: usize) -> Polynomial {
    let e = p.terms().iter().map(|t| t.0.exp(v)).min().unwrap_or(0);
    if e == 0 {
        return p.clone();
    }
    let d = Monomial::var_pow(v, e);
    let terms = p.terms().iter().map(|&(m, c)| (d.quotient_of(&m), c)).collect();
    Polynomial::from_terms(p.ring(), p.order(), terms)
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Determinant of a square matrix of polynomials by cofactor expansion.
pub fn poly_determinant(m: &[Vec<Polynomial>]) -> Polynomial {
    let n = m.len();
    assert!(n > 0 && m.iter().all(|r| r.len() == n));
    if n == 1 {
        return m[0][0].clone();
    }
    if n == 2 {
        return &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0]);
    }
    let ring = m[0][0].ring();
    let mut acc = Polynomial::zero(ring);
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Polynomial>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(c, _)| c != j)
                    .map(|(_, p)| p.clone())
                    .collect()
            })
            .collect();
        let term = &m[0][j] * &poly_determinant(&minor);
        acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}
