//! Ideals of images of maps, computed degree by degree as kernels of
//! `F ↦ F(images)` (modulo the ideal of the source when there is one).

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::invariants::hilbert_data_raw;
use crate::kernel::{
    monomials_of_degree, GroebnerBasis, HomogeneousIdeal, Matrix, Monomial, Polynomial, Ring,
};

/// Evaluates monomials in the target variables on the image forms, reducing
/// modulo the source ideal, with products reused across degrees.
pub struct ImageMap<'a> {
    target: Ring,
    images: &'a [Polynomial],
    source: Option<&'a GroebnerBasis>,
    products: HashMap<Monomial, Polynomial>,
    kernels: Vec<Option<Vec<Polynomial>>>,
}

impl<'a> ImageMap<'a> {
    /// `images[i]` is the image of target variable `i`; `source` is a Gröbner
    /// basis of the ideal of the source (for maps defined on a subvariety).
    pub fn new(target: Ring, images: &'a [Polynomial], source: Option<&'a GroebnerBasis>) -> Result<Self> {
        if images.len() != target.nvars {
            return Err(Error::InvalidArgument(format!(
                "{} images for {} target variables",
                images.len(),
                target.nvars
            )));
        }
        let mut products = HashMap::new();
        let src_ring = images[0].ring();
        products.insert(Monomial::ONE, Polynomial::one(src_ring));
        Ok(ImageMap {
            target,
            images,
            source,
            products,
            kernels: vec![Some(vec![])],
        })
    }

    fn product(&mut self, m: &Monomial) -> Polynomial {
        if let Some(p) = self.products.get(m) {
            return p.clone();
        }
        let i = (0..self.target.nvars).rev().find(|&i| m.exp(i) > 0).expect("non-constant");
        let rest = Monomial::var(i).quotient_of(m);
        let prev = self.product(&rest);
        let mut p = &prev * &self.images[i];
        if let Some(gb) = self.source {
            p = gb.normal_form(&p);
        }
        self.products.insert(*m, p.clone());
        p
    }

    /// Basis of the degree-`k` forms vanishing on the image.
    pub fn kernel(&mut self, k: u32) -> Vec<Polynomial> {
        let k_us = k as usize;
        if self.kernels.len() > k_us {
            if let Some(v) = &self.kernels[k_us] {
                return v.clone();
            }
        }
        let monos = monomials_of_degree(self.target.nvars, k);
        let prods: Vec<Polynomial> = monos.iter().map(|m| self.product(m)).collect();
        let mut index: HashMap<Monomial, usize> = HashMap::new();
        for p in &prods {
            for (m, _) in p.terms() {
                let n = index.len();
                index.entry(*m).or_insert(n);
            }
        }
        let field = self.target.field;
        let mut mat = Matrix::zeros(field, index.len(), monos.len());
        for (col, p) in prods.iter().enumerate() {
            for (m, c) in p.terms() {
                mat.set(index[m], col, *c);
            }
        }
        let ker: Vec<Polynomial> = mat
            .kernel()
            .into_iter()
            .map(|v| {
                let terms = monos.iter().zip(v).filter(|(_, c)| *c != 0).map(|(m, c)| (*m, c)).collect();
                Polynomial::from_terms(self.target, Default::default(), terms)
            })
            .collect();
        while self.kernels.len() <= k_us {
            self.kernels.push(None);
        }
        self.kernels[k_us] = Some(ker.clone());
        ker
    }
}

/// Saturated ideal of the image, generated by kernels up to some degree `K ≤ max_degree`.
///
/// The candidate `J = sat(kernels in degrees ≤ K)` lies inside the image
/// ideal; it is accepted once its graded pieces match the exact kernel
/// dimensions in every degree up to `K + 2`.
pub fn implicitize(
    target: Ring,
    images: &[Polynomial],
    source: Option<&HomogeneousIdeal>,
    max_degree: u32,
) -> Result<HomogeneousIdeal> {
    let gb = match source {
        Some(s) => Some(s.gb()?),
        None => None,
    };
    let mut map = ImageMap::new(target, images, gb.as_deref())?;
    let mut gens: Vec<Polynomial> = Vec::new();
    for k in 1..=max_degree {
        gens.extend(map.kernel(k));
        if gens.is_empty() {
            continue;
        }
        let j = HomogeneousIdeal::new(target, gens.clone())?;
        let j = j.saturate_irrelevant()?;
        let data = hilbert_data_raw(&j)?;
        let agrees = (1..=k + 2).all(|e| {
            let exact = map.kernel(e).len() as i64;
            target.graded_dim(e as i64) - data.hf(e as i64) == exact
        });
        if agrees {
            // trim generators to the reduced basis
            let basis = j.gb()?.elements().to_vec();
            let out = HomogeneousIdeal::new(target, basis)?;
            out.set_saturation_flag(crate::kernel::Saturation::Yes);
            return Ok(out);
        }
    }
    Err(Error::Certificate {
        name: "implicitization".into(),
        expected: format!("stable image ideal by degree {max_degree}"),
        actual: "graded dimensions still disagree".into(),
    })
}
