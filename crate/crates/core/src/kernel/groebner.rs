//! Buchberger's algorithm with the sugar pair-selection strategy and the
//! Gebauer–Möller installation of both Buchberger criteria.

use std::cmp::Ordering;

use super::field::Field;
use super::monomial::{Monomial, MonomialOrder, MAX_VARS};
use super::poly::{merge_scaled, Polynomial, Ring, Term};
use crate::error::{Error, Result};

/// Default S-pair budget for a single basis computation.
pub const DEFAULT_PAIR_BUDGET: usize = 2_000_000;

/// A reduced Gröbner basis together with the order it was computed for.
///
/// Elements are monic, inter-reduced, sorted ascending by leading monomial,
/// and each element's terms are sorted in `order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    ring: Ring,
    order: MonomialOrder,
    elems: Vec<Polynomial>,
}

impl GroebnerBasis {
    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn elements(&self) -> &[Polynomial] {
        &self.elems
    }

    pub fn into_elements(self) -> Vec<Polynomial> {
        self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    /// Whether the basis is `{1}`.
    pub fn is_unit(&self) -> bool {
        self.elems.len() == 1 && self.elems[0].lead_monomial() == Some(Monomial::ONE)
    }

    pub fn lead_monomials(&self) -> Vec<Monomial> {
        self.elems.iter().filter_map(|p| p.lead_monomial()).collect()
    }

    pub fn normal_form(&self, f: &Polynomial) -> Polynomial {
        let reducers = Reducers::new(&self.elems, self.order);
        let terms = reducers.reduce_full(f.with_order(self.order).into_terms(), self.ring.field);
        Polynomial::from_sorted(self.ring, self.order, terms)
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        self.normal_form(f).is_zero()
    }
}

/// Multivariate division remainder of `f` by `basis` (any generating list, not
/// necessarily a Gröbner basis).
pub fn normal_form(f: &Polynomial, basis: &[Polynomial], order: MonomialOrder) -> Result<Polynomial> {
    for b in basis {
        f.ring().check_same(&b.ring())?;
    }
    let monic: Vec<Polynomial> = basis
        .iter()
        .filter(|b| !b.is_zero())
        .map(|b| b.with_order(order).monic())
        .collect();
    let reducers = Reducers::new(&monic, order);
    let terms = reducers.reduce_full(f.with_order(order).into_terms(), f.field());
    Ok(Polynomial::from_sorted(f.ring(), order, terms))
}

/// Compute the reduced Gröbner basis of the ideal generated by `gens`.
pub fn groebner_basis(
    ring: Ring,
    gens: &[Polynomial],
    order: MonomialOrder,
    pair_budget: usize,
) -> Result<GroebnerBasis> {
    for g in gens {
        ring.check_same(&g.ring())?;
    }
    let mut eng = Engine::new(ring, order);
    // deterministic input order: by leading monomial, then length
    let mut input: Vec<Polynomial> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| g.with_order(order).monic())
        .collect();
    input.sort_by(|a, b| {
        order
            .cmp(&a.lead_monomial().unwrap(), &b.lead_monomial().unwrap())
            .then(a.len().cmp(&b.len()))
    });
    for g in input {
        let sugar = g.total_degree().unwrap_or(0);
        let terms = eng.reduce(g.into_terms(), true);
        if terms.is_empty() {
            continue;
        }
        let idx = eng.push(terms, sugar);
        if eng.unit {
            break;
        }
        eng.update(idx);
    }
    let mut processed = 0usize;
    while !eng.unit {
        let Some(pair) = eng.select_pair() else { break };
        processed += 1;
        if processed > pair_budget {
            return Err(Error::ResourceLimit { pairs: processed - 1 });
        }
        let spoly = eng.spoly(&pair);
        let terms = eng.reduce(spoly, true);
        if terms.is_empty() {
            continue;
        }
        let idx = eng.push(terms, pair.sugar);
        if eng.unit {
            break;
        }
        eng.update(idx);
    }
    Ok(eng.finish())
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    sugar: u32,
}

struct Elem {
    terms: Vec<Term>,
    lm: Monomial,
    mask: u64,
    sugar: u32,
}

/// Divisibility pre-filter: bit `4*i + k` is set when exponent of `x_i` exceeds `k`.
#[inline]
fn divmask(m: &Monomial) -> u64 {
    let mut mask = 0u64;
    for i in 0..MAX_VARS {
        let e = m.exp(i).min(4);
        for k in 0..e {
            mask |= 1 << (4 * i as u32 + k);
        }
    }
    mask
}

struct Engine {
    ring: Ring,
    order: MonomialOrder,
    elems: Vec<Elem>,
    active: Vec<bool>,
    pairs: Vec<Pair>,
    unit: bool,
}

impl Engine {
    fn new(ring: Ring, order: MonomialOrder) -> Self {
        Engine {
            ring,
            order,
            elems: Vec::new(),
            active: Vec::new(),
            pairs: Vec::new(),
            unit: false,
        }
    }

    fn field(&self) -> Field {
        self.ring.field
    }

    fn push(&mut self, mut terms: Vec<Term>, sugar: u32) -> usize {
        let f = self.field();
        let lc = terms[0].1;
        if lc != 1 {
            let inv = f.inv(lc);
            for t in terms.iter_mut() {
                t.1 = f.mul(t.1, inv);
            }
        }
        let lm = terms[0].0;
        if lm == Monomial::ONE {
            self.unit = true;
        }
        let sugar = sugar.max(lm.degree());
        self.elems.push(Elem {
            mask: divmask(&lm),
            lm,
            terms,
            sugar,
        });
        self.active.push(false);
        self.elems.len() - 1
    }

    fn find_reducer(&self, m: &Monomial) -> Option<usize> {
        let mm = divmask(m);
        let mut best: Option<usize> = None;
        for (k, e) in self.elems.iter().enumerate() {
            if e.mask & !mm != 0 || !e.lm.divides(m) {
                continue;
            }
            match best {
                Some(b) if self.elems[b].terms.len() <= e.terms.len() => {}
                _ => best = Some(k),
            }
        }
        best
    }

    /// Reduce by all stored elements; `full` also reduces the tail.
    fn reduce(&self, mut g: Vec<Term>, full: bool) -> Vec<Term> {
        let f = self.field();
        let mut done: Vec<Term> = Vec::new();
        let mut start = 0usize;
        while start < g.len() {
            let (m, c) = g[start];
            match self.find_reducer(&m) {
                Some(k) => {
                    let e = &self.elems[k];
                    let q = e.lm.quotient_of(&m);
                    g = merge_scaled(&g[start..], f.neg(c), &q, &e.terms, self.order, f);
                    start = 0;
                }
                None => {
                    if !full {
                        break;
                    }
                    done.push((m, c));
                    start += 1;
                }
            }
        }
        if full {
            done
        } else {
            g.drain(..start);
            g
        }
    }

    fn spoly(&self, p: &Pair) -> Vec<Term> {
        let f = self.field();
        let a = &self.elems[p.i];
        let b = &self.elems[p.j];
        let qa = a.lm.quotient_of(&p.lcm);
        let qb = b.lm.quotient_of(&p.lcm);
        let left: Vec<Term> = a.terms[1..]
            .iter()
            .map(|&(m, c)| (m.mul(&qa), c))
            .collect();
        merge_scaled(&left, f.neg(1), &qb, &b.terms[1..], self.order, f)
    }

    fn select_pair(&mut self) -> Option<Pair> {
        if self.pairs.is_empty() {
            return None;
        }
        let order = self.order;
        let mut best = 0usize;
        for k in 1..self.pairs.len() {
            let (a, b) = (&self.pairs[k], &self.pairs[best]);
            let c = a
                .sugar
                .cmp(&b.sugar)
                .then_with(|| order.cmp(&a.lcm, &b.lcm))
                .then_with(|| (a.i, a.j).cmp(&(b.i, b.j)));
            if c == Ordering::Less {
                best = k;
            }
        }
        Some(self.pairs.swap_remove(best))
    }

    fn pair_sugar(&self, i: usize, j: usize, lcm: &Monomial) -> u32 {
        let a = &self.elems[i];
        let b = &self.elems[j];
        let sa = a.sugar + lcm.degree() - a.lm.degree();
        let sb = b.sugar + lcm.degree() - b.lm.degree();
        sa.max(sb)
    }

    fn update(&mut self, h: usize) {
        let lh = self.elems[h].lm;
        let mut cand: Vec<(usize, Monomial, bool)> = (0..self.elems.len())
            .filter(|&g| g != h && self.active[g])
            .map(|g| {
                let lg = self.elems[g].lm;
                (g, lh.lcm(&lg), lh.is_coprime(&lg))
            })
            .collect();
        let mut kept: Vec<(usize, Monomial, bool)> = Vec::new();
        while let Some((g, l, coprime)) = cand.pop() {
            let dominated = cand
                .iter()
                .chain(kept.iter())
                .any(|(_, l2, _)| l2.divides(&l));
            if coprime || !dominated {
                kept.push((g, l, coprime));
            }
        }
        let lms: Vec<Monomial> = self.elems.iter().map(|e| e.lm).collect();
        self.pairs.retain(|p| {
            !(lh.divides(&p.lcm)
                && lms[p.i].lcm(&lh) != p.lcm
                && lms[p.j].lcm(&lh) != p.lcm)
        });
        for (g, l, coprime) in kept {
            if coprime {
                continue;
            }
            let sugar = self.pair_sugar(g, h, &l);
            let (i, j) = if g < h { (g, h) } else { (h, g) };
            self.pairs.push(Pair { i, j, lcm: l, sugar });
        }
        for g in 0..self.elems.len() {
            if g != h && self.active[g] && lh.divides(&self.elems[g].lm) {
                self.active[g] = false;
            }
        }
        self.active[h] = true;
    }

    fn finish(self) -> GroebnerBasis {
        let ring = self.ring;
        let order = self.order;
        if self.unit {
            return GroebnerBasis {
                ring,
                order,
                elems: vec![Polynomial::one(ring).with_order(order)],
            };
        }
        let idx: Vec<usize> = (0..self.elems.len()).filter(|&k| self.active[k]).collect();
        let minimal: Vec<Polynomial> = idx
            .iter()
            .map(|&k| Polynomial::from_sorted(ring, order, self.elems[k].terms.clone()))
            .collect();
        let elems = interreduce(ring, order, minimal);
        GroebnerBasis { ring, order, elems }
    }
}

/// Tail-reduce a minimal basis (distinct, mutually non-dividing monic leads).
fn interreduce(ring: Ring, order: MonomialOrder, minimal: Vec<Polynomial>) -> Vec<Polynomial> {
    let f = ring.field;
    let mut out: Vec<Polynomial> = Vec::with_capacity(minimal.len());
    for (k, p) in minimal.iter().enumerate() {
        let others: Vec<Polynomial> = minimal
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != k)
            .map(|(_, q)| q.clone())
            .collect();
        let red = Reducers::new(&others, order);
        let mut terms = p.terms().to_vec();
        let head = terms.remove(0);
        let mut tail = red.reduce_full(terms, f);
        tail.insert(0, head);
        out.push(Polynomial::from_sorted(ring, order, tail));
    }
    out.sort_by(|a, b| order.cmp(&a.lead_monomial().unwrap(), &b.lead_monomial().unwrap()));
    out
}

/// A fixed reducer set used for normal forms.
pub(crate) struct Reducers<'a> {
    polys: &'a [Polynomial],
    masks: Vec<u64>,
    order: MonomialOrder,
}

impl<'a> Reducers<'a> {
    /// `polys` must be monic and sorted in `order`.
    pub(crate) fn new(polys: &'a [Polynomial], order: MonomialOrder) -> Self {
        let masks = polys
            .iter()
            .map(|p| divmask(&p.lead_monomial().expect("nonzero reducer")))
            .collect();
        Reducers { polys, masks, order }
    }

    fn find(&self, m: &Monomial) -> Option<usize> {
        let mm = divmask(m);
        let mut best: Option<usize> = None;
        for (k, p) in self.polys.iter().enumerate() {
            if self.masks[k] & !mm != 0 || !p.lead_monomial().unwrap().divides(m) {
                continue;
            }
            match best {
                Some(b) if self.polys[b].len() <= p.len() => {}
                _ => best = Some(k),
            }
        }
        best
    }

    pub(crate) fn reduce_full(&self, mut g: Vec<Term>, f: Field) -> Vec<Term> {
        let mut done: Vec<Term> = Vec::new();
        let mut start = 0usize;
        while start < g.len() {
            let (m, c) = g[start];
            match self.find(&m) {
                Some(k) => {
                    let p = &self.polys[k];
                    debug_assert_eq!(p.order(), self.order);
                    let q = p.lead_monomial().unwrap().quotient_of(&m);
                    g = merge_scaled(&g[start..], f.neg(c), &q, p.terms(), self.order, f);
                    start = 0;
                }
                None => {
                    done.push((m, c));
                    start += 1;
                }
            }
        }
        done
    }
}
