//! Truncations of the completed polynomial modules at an orbit 𝔖_d·a.
//!
//! A [`Truncated`] element stores one series per orbit point b (Hecke side,
//! in the shifted variables x_r = X_r − b_r) or per idempotent 𝒊 (KLR side,
//! in the Y_r), known modulo total degree `order`. Exact divided differences
//! lose one order; multiplication and series inversion keep it.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::hecke_core::{HeckeAlg, HeckeElement, HeckeKey, HeckeLetter, HeckeWord};
use crate::klr_core::{KlrAlg, KlrElement, KlrLetter, KlrWord};
use crate::linalg::{self, Echelon};
use crate::perm::{next_permutation, Perm};
use crate::report::{CheckRecord, Report};
use crate::scalars_params::{checked_inv, sc, show_seq, ParamSet, Scalar, Variant};
use crate::superrings::{exponents_up_to, klr_simple, mask_indices, ExtMask, Mono, Ring, SuperPoly};

/// All distinct permutations of `a`, in lexicographic order.
pub fn orbit(a: &[Scalar]) -> Vec<Vec<Scalar>> {
    let mut cur = a.to_vec();
    cur.sort();
    let mut out = vec![cur.clone()];
    while next_permutation(&mut cur) {
        out.push(cur.clone());
    }
    out
}


/// (b + x_r)^e modulo degree `order`, for any integer e (b ≠ 0 when e < 0).
pub fn shift_power(ring: &Ring, d: usize, r: usize, b: &Scalar, e: i32, order: i64) -> Result<SuperPoly> {
    let mut out = SuperPoly::zero(ring.clone(), d);
    if e < 0 && b.is_zero() {
        return Err(Error::NotInvertible(format!("X_{r} at a zero coordinate")));
    }
    let top = if e >= 0 { (e as i64).min(order - 1) } else { order - 1 };
    // generalized binomial: C(e,k)·b^{e−k}
    let mut binom = Scalar::one();
    for k in 0..=top.max(-1) {
        if k > 0 {
            binom = binom * Scalar::from_integer((e as i64 - k + 1).into()) / Scalar::from_integer(k.into());
        }
        if binom.is_zero() {
            break;
        }
        let p = e as i64 - k;
        let bp = if p >= 0 {
            num_traits::pow(b.clone(), p as usize)
        } else {
            checked_inv(&num_traits::pow(b.clone(), (-p) as usize))?
        };
        let mut ex = vec![0; d];
        ex[r - 1] = k as i32;
        out.add_term(ex, 0, &binom * bp);
    }
    Ok(out)
}

/// Re-expands f around b in the shifted variables and drops degree ≥ order.
pub fn truncate(f: &SuperPoly, b: &[Scalar], order: i64) -> Result<SuperPoly> {
    let d = f.d;
    let mut out = f.same_shape();
    let mut cache: HashMap<(usize, i32), SuperPoly> = HashMap::new();
    for ((e, m), c) in &f.terms {
        let mut term = SuperPoly::monomial(f.ring.clone(), d, vec![0; d], *m, c.clone());
        for (r, &k) in e.iter().enumerate() {
            if k == 0 {
                continue;
            }
            if !cache.contains_key(&(r, k)) {
                cache.insert((r, k), shift_power(&f.ring, d, r + 1, &b[r], k, order)?);
            }
            term = term.mul_truncated(&cache[&(r, k)], Some(order));
        }
        out.add_assign_scaled(&term, &Scalar::one());
    }
    Ok(out)
}

/// Inverse of a series with invertible exterior-free constant term, modulo degree `order`.
pub fn invert_series(f: &SuperPoly, order: i64) -> Result<SuperPoly> {
    let c = f.constant_term();
    if c.is_zero() {
        return Err(Error::NotInvertible(format!("{f} has no constant term")));
    }
    let ci = checked_inv(&c)?;
    // f = c(1 + u), u nilpotent modulo degree `order`
    let mut u = f.scale(&ci);
    u.add_term(vec![0; f.d], 0, -Scalar::one());
    let one = f.scalar(Scalar::one());
    let mut sum = one.clone();
    let mut pw = one;
    let neg_u = u.neg();
    for _ in 0..(order + f.d as i64 + 1) {
        pw = pw.mul_truncated(&neg_u, Some(order));
        if pw.is_zero() {
            break;
        }
        sum.add_assign_scaled(&pw, &Scalar::one());
    }
    Ok(sum.scale(&ci).keep_below_degree(order))
}

/// Element of a truncated orbit-summed module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Truncated {
    pub d: usize,
    pub order: i64,
    pub comps: BTreeMap<Vec<Scalar>, SuperPoly>,
}

impl Truncated {
    pub fn zero(d: usize, order: i64) -> Self {
        Truncated { d, order, comps: BTreeMap::new() }
    }

    pub fn single(key: Vec<Scalar>, f: SuperPoly, order: i64) -> Self {
        let mut t = Truncated::zero(f.d, order);
        t.add_comp(key, &f, &Scalar::one());
        t
    }

    pub fn add_comp(&mut self, key: Vec<Scalar>, f: &SuperPoly, c: &Scalar) {
        let g = f.keep_below_degree(self.order);
        if g.is_zero() {
            return;
        }
        let slot = self.comps.entry(key).or_insert_with(|| g.same_shape());
        slot.add_assign_scaled(&g, c);
        self.comps.retain(|_, p| !p.is_zero());
    }

    pub fn is_zero(&self) -> bool {
        self.comps.values().all(|p| p.is_zero())
    }

    pub fn comp(&self, key: &[Scalar]) -> Option<&SuperPoly> {
        self.comps.get(key)
    }

    /// Drops everything of degree ≥ order (order may only decrease).
    pub fn truncated_to(&self, order: i64) -> Self {
        let order = order.min(self.order);
        let mut out = Truncated::zero(self.d, order);
        for (k, p) in &self.comps {
            out.add_comp(k.clone(), p, &Scalar::one());
        }
        out
    }

    pub fn add_scaled(&mut self, other: &Truncated, c: &Scalar) {
        if other.order < self.order {
            *self = self.truncated_to(other.order);
        }
        for (k, p) in &other.comps {
            self.add_comp(k.clone(), p, c);
        }
    }

    pub fn plus(&self, other: &Truncated) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &Scalar::one());
        out
    }

    pub fn sub(&self, other: &Truncated) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &sc(-1));
        out
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Truncated::zero(self.d, self.order);
        out.add_scaled(self, c);
        out
    }

    /// Equality modulo degree `order`; both sides must be known that far.
    pub fn agrees_to(&self, other: &Truncated, order: i64) -> Result<bool> {
        if self.order < order || other.order < order {
            return Err(Error::Internal(format!(
                "precision {} / {} below the requested order {order}",
                self.order, other.order
            )));
        }
        Ok(self.truncated_to(order).sub(&other.truncated_to(order)).is_zero())
    }

    /// Projection onto one component (the idempotent 1_b).
    pub fn project(&self, key: &[Scalar]) -> Self {
        let mut out = Truncated::zero(self.d, self.order);
        if let Some(p) = self.comps.get(key) {
            out.comps.insert(key.to_vec(), p.clone());
        }
        out
    }

    /// Componentwise product with a family of series.
    pub fn mul_comps(&self, coeff: &BTreeMap<Vec<Scalar>, SuperPoly>) -> Self {
        let mut out = Truncated::zero(self.d, self.order);
        for (k, p) in &self.comps {
            if let Some(c) = coeff.get(k) {
                out.add_comp(k.clone(), &c.mul_truncated(p, Some(self.order)), &Scalar::one());
            }
        }
        out
    }

    pub fn max_ext_degree(&self) -> u32 {
        self.comps.values().map(|p| p.max_ext_degree()).max().unwrap_or(0)
    }
}

impl std::fmt::Display for Truncated {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0 (mod deg {})", self.order);
        }
        let parts: Vec<String> = self.comps.iter().map(|(k, p)| format!("[{}]·1_{}", p.render("x", "θ"), show_seq(k))).collect();
        write!(f, "{} (mod deg {})", parts.join(" + "), self.order)
    }
}

/// The completed Hecke-side module ⊕_b P̂_b 1_b.
#[derive(Debug, Clone)]
pub struct HeckeCompletion {
    pub alg: HeckeAlg,
    pub points: Vec<Vec<Scalar>>,
}

impl HeckeCompletion {
    pub fn new(alg: HeckeAlg, a: &[Scalar]) -> Result<Self> {
        if a.len() != alg.d {
            return Err(Error::InvalidParam("orbit point length differs from d".into()));
        }
        if alg.is_q() && a.iter().any(|x| x.is_zero()) {
            return Err(Error::InvalidParam("q-variant points must be nonzero".into()));
        }
        Ok(HeckeCompletion { points: orbit(a), alg })
    }

    pub fn from_params(p: &ParamSet) -> Result<Self> {
        Self::new(HeckeAlg::from_params(p), &p.a)
    }

    pub fn ring(&self) -> Ring {
        self.alg.ring()
    }

    pub fn d(&self) -> usize {
        self.alg.d
    }

    /// X_r in the component b, as a shifted series.
    pub fn x_at(&self, b: &[Scalar], r: usize) -> SuperPoly {
        let mut p = SuperPoly::var(self.ring(), self.d(), r);
        p.add_term(vec![0; self.d()], 0, b[r - 1].clone());
        p
    }

    /// The element f·1_b for a polynomial f in X.
    pub fn embed(&self, f: &SuperPoly, b: &[Scalar], order: i64) -> Result<Truncated> {
        let f = if self.alg.is_q() { f.retag(Ring::HeckePl) } else { f.clone() };
        Ok(Truncated::single(b.to_vec(), truncate(&f, b, order)?, order))
    }

    /// A shifted monomial x^e θ^S 1_b.
    pub fn monomial(&self, b: &[Scalar], e: Vec<i32>, mask: ExtMask, order: i64) -> Truncated {
        Truncated::single(b.to_vec(), SuperPoly::monomial(self.ring(), self.d(), e, mask, Scalar::one()), order)
    }

    /// s_r, moving component b to s_r·b.
    pub fn reflect(&self, r: usize, f: &Truncated) -> Truncated {
        let mut out = Truncated::zero(f.d, f.order);
        for (b, p) in &f.comps {
            let c = Perm::simple(self.d(), r).act_seq(b);
            let mut twist = p.root(r);
            twist.add_term(vec![0; self.d()], 0, &c[r - 1] - &c[r]);
            let g = p.reflect(r, Some(&twist), self.ring()).keep_below_degree(f.order);
            out.add_comp(c, &g, &Scalar::one());
        }
        out
    }

    fn has_equal_pair(&self, r: usize) -> bool {
        self.points.iter().any(|b| b[r - 1] == b[r])
    }

    /// The completed Demazure operator ∂_r.
    pub fn demazure(&self, r: usize, f: &Truncated) -> Result<Truncated> {
        let loss = i64::from(self.has_equal_pair(r));
        let order = f.order - loss;
        let sf = self.reflect(r, f);
        let mut out = Truncated::zero(f.d, order);
        for c in &self.points {
            let fc = f.comp(c);
            if c[r - 1] == c[r] {
                if let Some(fc) = fc {
                    out.add_comp(c.clone(), &fc.divided_difference(r), &Scalar::one());
                }
                continue;
            }
            let mut g = fc.cloned().unwrap_or_else(|| SuperPoly::zero(self.ring(), self.d()));
            if let Some(s) = sf.comp(c) {
                g.add_assign_scaled(s, &sc(-1));
            }
            if g.is_zero() {
                continue;
            }
            let mut den = g.root(r).retag(self.ring());
            den.add_term(vec![0; self.d()], 0, &c[r - 1] - &c[r]);
            let inv = invert_series(&den, f.order)?;
            out.add_comp(c.clone(), &g.mul_truncated(&inv, Some(order)), &Scalar::one());
        }
        Ok(out)
    }

    pub fn act_t(&self, r: usize, f: &Truncated) -> Result<Truncated> {
        let s = self.reflect(r, f);
        let dd = self.demazure(r, f)?;
        match self.alg.variant {
            Variant::Degenerate => Ok(s.sub(&dd)),
            Variant::Q => {
                let q = &self.alg.q;
                let xs: BTreeMap<Vec<Scalar>, SuperPoly> = self.points.iter().map(|b| (b.clone(), self.x_at(b, r + 1))).collect();
                let mut out = s.scale(q);
                out.add_scaled(&dd.mul_comps(&xs), &(Scalar::one() - q));
                Ok(out)
            }
        }
    }

    pub fn act_inv_t(&self, r: usize, f: &Truncated) -> Result<Truncated> {
        if !self.alg.is_q() {
            return Err(Error::VariantMismatch("T^{-1} letters need the q-variant".into()));
        }
        let q = &self.alg.q;
        let mut out = self.act_t(r, f)?;
        out.add_scaled(f, &(Scalar::one() - q));
        Ok(out.scale(&checked_inv(q)?))
    }

    /// Multiplication by a polynomial (Laurent for the q-variant) in X and θ.
    pub fn act_poly(&self, p: &SuperPoly, f: &Truncated) -> Result<Truncated> {
        let p = if self.alg.is_q() { p.retag(Ring::HeckePl) } else { p.clone() };
        if !self.alg.is_q() && p.has_negative_exponents() {
            return Err(Error::RingMismatch("negative exponents in the degenerate algebra".into()));
        }
        let mut out = Truncated::zero(f.d, f.order);
        for (b, g) in &f.comps {
            let pb = truncate(&p, b, f.order)?;
            out.add_comp(b.clone(), &pb.mul_truncated(g, Some(f.order)), &Scalar::one());
        }
        Ok(out)
    }

    pub fn act_theta(&self, f: &Truncated) -> Truncated {
        let mut out = Truncated::zero(f.d, f.order);
        for (b, g) in &f.comps {
            out.add_comp(b.clone(), &g.mul_ext_left(1), &Scalar::one());
        }
        out
    }

    pub fn act_letter(&self, l: &HeckeLetter, f: &Truncated) -> Result<Truncated> {
        match l {
            HeckeLetter::Poly(p) => self.act_poly(p, f),
            HeckeLetter::T(r) => self.act_t(*r, f),
            HeckeLetter::InvT(r) => self.act_inv_t(*r, f),
            HeckeLetter::Theta => Ok(self.act_theta(f)),
            HeckeLetter::Xi(r) => {
                let mut g = f.clone();
                for x in self.alg.xi_letters(*r).iter().rev() {
                    g = self.act_letter(x, &g)?;
                }
                Ok(g)
            }
        }
    }

    pub fn act_word(&self, w: &HeckeWord, f: &Truncated) -> Result<Truncated> {
        let mut g = f.clone();
        for l in w.letters.iter().rev() {
            g = self.act_letter(l, &g)?;
        }
        Ok(g)
    }

    pub fn act_key(&self, k: &HeckeKey, f: &Truncated) -> Result<Truncated> {
        self.act_word(&HeckeWord::from_key(&self.alg, k), f)
    }

    pub fn act_element(&self, h: &HeckeElement, f: &Truncated) -> Result<Truncated> {
        let mut out: Option<Truncated> = None;
        for (k, c) in &h.terms {
            let g = self.act_key(k, f)?;
            match &mut out {
                None => out = Some(g.scale(c)),
                Some(o) => o.add_scaled(&g, c),
            }
        }
        Ok(out.unwrap_or_else(|| Truncated::zero(f.d, f.order)))
    }

    /// Probes x^e θ^S 1_b with |e| ≤ deg.
    pub fn probes(&self, deg: usize, order: i64) -> Vec<Truncated> {
        let mut out = Vec::new();
        for b in &self.points {
            for e in exponents_up_to(self.d(), deg) {
                for m in 0..(1u32 << self.d()) {
                    out.push(self.monomial(b, e.clone(), m, order));
                }
            }
        }
        out
    }
}

/// The completed KLR-side module ⊕_𝒊 k[[Y]]⊗Λ(Ω) 1_𝒊.
pub struct KlrCompletion<'a> {
    pub alg: &'a KlrAlg,
}

impl<'a> KlrCompletion<'a> {
    pub fn new(alg: &'a KlrAlg) -> Self {
        KlrCompletion { alg }
    }

    pub fn d(&self) -> usize {
        self.alg.d
    }

    pub fn monomial(&self, i: &[Scalar], e: Vec<i32>, mask: ExtMask, order: i64) -> Truncated {
        Truncated::single(i.to_vec(), SuperPoly::monomial(self.alg.ring(i), self.d(), e, mask, Scalar::one()), order)
    }

    /// The 𝔖_d-action s_k on PR_ν.
    pub fn reflect(&self, k: usize, f: &Truncated) -> Truncated {
        let mut out = Truncated::zero(f.d, f.order);
        for p in f.comps.values() {
            let g = klr_simple(k, p);
            let t = g.ring.label().unwrap().to_vec();
            out.add_comp(t, &g, &Scalar::one());
        }
        out
    }

    fn has_equal_pair(&self, r: usize, f: &Truncated) -> bool {
        f.comps.keys().any(|i| i[r - 1] == i[r])
    }

    pub fn act_letter(&self, l: &KlrLetter, f: &Truncated) -> Result<Truncated> {
        match l {
            KlrLetter::Tau(r) if *r >= 1 && *r < self.d() => {
                let order = f.order - i64::from(self.has_equal_pair(*r, f));
                let mut out = Truncated::zero(f.d, order);
                for p in f.comps.values() {
                    let g = self.alg.act_letter(l, p)?;
                    let t = g.ring.label().unwrap().to_vec();
                    out.add_comp(t, &g, &Scalar::one());
                }
                Ok(out)
            }
            _ => {
                let mut out = Truncated::zero(f.d, f.order);
                for (i, p) in &f.comps {
                    out.add_comp(i.clone(), &self.alg.act_letter(l, p)?, &Scalar::one());
                }
                Ok(out)
            }
        }
    }

    /// A word acts on its source component only.
    pub fn act_word(&self, w: &KlrWord, f: &Truncated) -> Result<Truncated> {
        let mut g = f.project(&w.source);
        for l in w.letters.iter().rev() {
            g = self.act_letter(l, &g)?;
        }
        Ok(g)
    }

    pub fn act_element(&self, e: &KlrElement, f: &Truncated) -> Result<Truncated> {
        let mut out: Option<Truncated> = None;
        for (w, c) in &e.terms {
            let g = self.act_word(w, f)?;
            match &mut out {
                None => out = Some(g.scale(c)),
                Some(o) => o.add_scaled(&g, c),
            }
        }
        Ok(out.unwrap_or_else(|| Truncated::zero(f.d, f.order)))
    }

    /// Multiplication by a series per component.
    pub fn act_series(&self, coeff: &BTreeMap<Vec<Scalar>, SuperPoly>, f: &Truncated) -> Truncated {
        f.mul_comps(coeff)
    }

    pub fn probes(&self, deg: usize, order: i64) -> Vec<Truncated> {
        let mut out = Vec::new();
        for i in self.alg.seqs() {
            for e in exponents_up_to(self.d(), deg) {
                for m in 0..(1u32 << self.d()) {
                    out.push(self.monomial(&i, e.clone(), m, order));
                }
            }
        }
        out
    }
}

/// Largest number of truncation orders an operator T_w ξ^S can lose.
fn max_loss(d: usize) -> i64 {
    (3 * d * (d - 1) / 2) as i64
}

/// Certifies that the operators x^m 1_{b'} T_w ξ^S (|m| < N) are linearly
/// independent on the completed module, one output component at a time.
/// Operator images are compared modulo degree 2N+1; a nonzero kernel vector
/// is reported as the witness.
pub fn completed_basis_check(p: &ParamSet, n: usize) -> Report {
    let id_base = format!("completion.{}.d{}.a{}.N{n}", p.variant, p.d, show_seq(&p.a));
    let rec = CheckRecord::timed(format!("{id_base}.basis_rank"), || {
        let comp = HeckeCompletion::from_params(p)?;
        let d = comp.d();
        // outputs are compared modulo a degree beyond N so that x^m with |m| < N stays visible
        let order = 2 * n as i64 + 1;
        let input_order = order + max_loss(d);
        let ms = exponents_up_to(d, n.saturating_sub(1));
        let perms = Perm::all(d);
        let probes = comp.probes(order as usize - 1, input_order);
        let mut keys = Vec::new();
        for w in &perms {
            for s in 0..(1u32 << d) {
                keys.push(HeckeKey { exps: vec![0; d], w: w.clone(), xi: s });
            }
        }
        // outputs of T_w ξ^S on every probe, truncated to N
        let outs: Vec<Vec<Truncated>> = keys
            .iter()
            .map(|k| probes.iter().map(|pr| Ok(comp.act_key(k, pr)?.truncated_to(order))).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        for (ki, row) in outs.iter().enumerate() {
            if row.iter().any(|t| t.order < order) {
                return Err(Error::Internal(format!("precision loss for {}", keys[ki])));
            }
        }
        for b in &comp.points {
            let ncols = keys.len() * ms.len();
            let mut rows: BTreeMap<(usize, Mono), Vec<(usize, Scalar)>> = BTreeMap::new();
            for (ki, row) in outs.iter().enumerate() {
                for (pi, t) in row.iter().enumerate() {
                    let Some(g) = t.comp(b) else { continue };
                    for (mi, m) in ms.iter().enumerate() {
                        let xm = SuperPoly::monomial(comp.ring(), d, m.clone(), 0, Scalar::one());
                        let h = xm.mul_truncated(g, Some(order));
                        for (mono, c) in &h.terms {
                            rows.entry((pi, mono.clone())).or_default().push((ki * ms.len() + mi, c.clone()));
                        }
                    }
                }
            }
            let mut ech = Echelon::new();
            for r in rows.values() {
                ech.insert(r);
                if ech.rank() == ncols {
                    break;
                }
            }
            if ech.rank() < ncols {
                let dense: Vec<Vec<Scalar>> = rows
                    .values()
                    .map(|r| {
                        let mut v = vec![Scalar::zero(); ncols];
                        for (c, x) in r {
                            v[*c] = x.clone();
                        }
                        v
                    })
                    .collect();
                let ker = linalg::kernel(&dense, ncols);
                let witness: Vec<String> = ker[0]
                    .iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(c, x)| format!("{}·x^{:?}·1_b·{}", x, ms[c % ms.len()], keys[c / ms.len()]))
                    .collect();
                return Ok(Some(format!(
                    "rank {} < {} at b = {}: {}",
                    ech.rank(),
                    ncols,
                    show_seq(b),
                    witness.join(" + ")
                )));
            }
        }
        Ok(None)
    });
    Report::from_records(vec![rec])
}

/// Ext-degree-1 part of a series: coefficients P_t of Ω_t (or θ_t).
pub fn linear_ext_coeffs(p: &SuperPoly) -> BTreeMap<usize, SuperPoly> {
    let mut out = BTreeMap::new();
    for r in 1..=p.d {
        let c = p.ext_component(1 << (r - 1));
        if !c.is_zero() {
            out.insert(r, c);
        }
    }
    out
}

/// True when every stored term has exterior degree exactly k.
pub fn is_ext_homogeneous(p: &SuperPoly, k: u32) -> bool {
    p.terms.keys().all(|(_, m)| m.count_ones() == k)
}

pub fn ext_indices(m: ExtMask) -> Vec<usize> {
    mask_indices(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars_params::{frac, ParamSet};
    use crate::superrings::random_poly;
    use proptest::prelude::*;
    use rand::SeedableRng;

    #[test]
    fn orbit_examples() {
        assert_eq!(orbit(&[sc(0), sc(1)]), vec![vec![sc(0), sc(1)], vec![sc(1), sc(0)]]);
        assert_eq!(orbit(&[sc(0), sc(0)]).len(), 1);
        assert_eq!(orbit(&[sc(0), sc(0), sc(1)]).len(), 3);
    }

    #[test]
    fn truncate_examples() {
        let x1 = SuperPoly::var(Ring::HeckeP, 1, 1);
        let t = truncate(&x1, &[sc(3)], 2).unwrap();
        let mut e = SuperPoly::var(Ring::HeckeP, 1, 1);
        e.add_term(vec![0], 0, sc(3));
        assert_eq!(t, e);
        assert_eq!(truncate(&x1, &[sc(3)], 1).unwrap(), SuperPoly::constant(Ring::HeckeP, 1, sc(3)));
        let mut f = x1.clone();
        f.add_term(vec![0], 0, sc(-3));
        assert!(truncate(&f.pow(2), &[sc(3)], 2).unwrap().is_zero());
        // X^{-1} at 2: 1/2 − x/4 + x²/8
        let inv = truncate(&SuperPoly::var_pow(Ring::HeckePl, 1, 1, -1), &[sc(2)], 3).unwrap();
        assert_eq!(inv.coeff(&[0], 0), frac(1, 2));
        assert_eq!(inv.coeff(&[1], 0), frac(-1, 4));
        assert_eq!(inv.coeff(&[2], 0), frac(1, 8));
    }

    #[test]
    fn invert_examples() {
        let mut f = SuperPoly::var(Ring::HeckeP, 2, 1);
        f.add_assign_scaled(&SuperPoly::var(Ring::HeckeP, 2, 2), &sc(-1));
        f.add_term(vec![0, 0], 0, sc(1));
        let g = invert_series(&f, 2).unwrap();
        let mut e = f.clone();
        e.add_term(vec![0, 0], 0, sc(-1));
        let mut expect = SuperPoly::one(Ring::HeckeP, 2);
        expect.add_assign_scaled(&e, &sc(-1));
        assert_eq!(g, expect);
        let c = SuperPoly::constant(Ring::HeckeP, 1, sc(5));
        assert_eq!(invert_series(&c, 3).unwrap(), SuperPoly::constant(Ring::HeckeP, 1, frac(1, 5)));
        assert!(matches!(invert_series(&SuperPoly::var(Ring::HeckeP, 1, 1), 3), Err(Error::NotInvertible(_))));
    }

    proptest! {
        #[test]
        fn truncate_is_multiplicative(seed in 0u64..500, b0 in -2i64..3, b1 in -2i64..3) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let f = random_poly(&mut rng, &Ring::HeckeP, 2, 3, 4, true);
            let g = random_poly(&mut rng, &Ring::HeckeP, 2, 3, 4, true);
            let b = [sc(b0), sc(b1)];
            let lhs = truncate(&f.mul_unchecked(&g), &b, 3).unwrap();
            let rhs = truncate(&f, &b, 3).unwrap().mul_truncated(&truncate(&g, &b, 3).unwrap(), Some(3));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn inverse_multiplies_to_one(seed in 0u64..500) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut f = random_poly(&mut rng, &Ring::HeckeP, 2, 3, 4, true);
            f.add_term(vec![0, 0], 0, sc(7) - f.constant_term());
            let g = invert_series(&f, 4).unwrap();
            prop_assert_eq!(f.mul_truncated(&g, Some(4)), SuperPoly::one(Ring::HeckeP, 2));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn demazure_is_linear_over_symmetric_polynomials(seed in 0u64..1000, equal in any::<bool>(), which in 0usize..3) {
            let alg = HeckeAlg::degenerate(2);
            let a = if equal { [sc(1), sc(1)] } else { [sc(0), sc(1)] };
            let comp = HeckeCompletion::new(alg, &a).unwrap();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut f = Truncated::zero(2, 6);
            for b in comp.points.clone() {
                let g = random_poly(&mut rng, &Ring::HeckeP, 2, 3, 4, true);
                f.add_scaled(&comp.embed(&g, &b, 6).unwrap(), &Scalar::one());
            }
            let x1 = SuperPoly::var(Ring::HeckeP, 2, 1);
            let x2 = SuperPoly::var(Ring::HeckeP, 2, 2);
            let z = match which {
                0 => x1.try_add(&x2).unwrap(),
                1 => x1.mul_unchecked(&x2),
                _ => {
                    let mut s = x1.pow(2).try_add(&x2.pow(2)).unwrap();
                    s.add_term(vec![0, 0], 0, sc(3));
                    s
                }
            };
            let lhs = comp.demazure(1, &comp.act_poly(&z, &f).unwrap()).unwrap();
            let rhs = comp.act_poly(&z, &comp.demazure(1, &f).unwrap()).unwrap();
            let order = lhs.order.min(rhs.order);
            prop_assert!(lhs.agrees_to(&rhs, order).unwrap());
        }
    }

    fn diagonal(comp: &HeckeCompletion, f: &SuperPoly, order: i64) -> Truncated {
        let mut v = Truncated::zero(comp.d(), order);
        for b in &comp.points {
            v.add_scaled(&comp.embed(f, b, order).unwrap(), &Scalar::one());
        }
        v
    }

    #[test]
    fn completed_action_matches_uncompleted() {
        for p in [
            ParamSet::ints(Variant::Degenerate, None, &[0], &[0, 1], &[0, 1]).unwrap(),
            ParamSet::ints(Variant::Degenerate, None, &[1], &[1, 1], &[1]).unwrap(),
            ParamSet::ints(Variant::Q, Some(2), &[1], &[1, 2], &[1, 2]).unwrap(),
        ] {
            let comp = HeckeCompletion::from_params(&p).unwrap();
            let alg = comp.alg.clone();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
            for _ in 0..4 {
                let f = random_poly(&mut rng, &alg.ring(), 2, 3, 4, true);
                let v = diagonal(&comp, &f, 7);
                for l in [HeckeLetter::T(1), HeckeLetter::Theta, HeckeLetter::Xi(2)] {
                    let got = comp.act_letter(&l, &v).unwrap();
                    let plain = alg.act(&HeckeWord::new(vec![l.clone()]), &f).unwrap();
                    let expect = diagonal(&comp, &plain, got.order);
                    assert!(got.agrees_to(&expect, got.order).unwrap(), "{l:?} on {f}");
                }
            }
        }
    }

    #[test]
    fn demazure_at_distinct_points_is_exact_polynomial_division() {
        let alg = HeckeAlg::degenerate(2);
        let comp = HeckeCompletion::new(alg, &[sc(0), sc(1)]).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        for _ in 0..5 {
            let f = random_poly(&mut rng, &Ring::HeckeP, 2, 3, 4, true);
            let dd = f.divided_difference(1);
            // f placed on every component: ∂ acts like the polynomial operator
            let mut v = Truncated::zero(2, 6);
            for b in &comp.points {
                v.add_scaled(&comp.embed(&f, b, 6).unwrap(), &Scalar::one());
            }
            let got = comp.demazure(1, &v).unwrap();
            let mut expect = Truncated::zero(2, 6);
            for b in &comp.points {
                expect.add_scaled(&comp.embed(&dd, b, 6).unwrap(), &Scalar::one());
            }
            assert!(got.agrees_to(&expect, 5).unwrap());
        }
    }

    #[test]
    fn basis_check_small() {
        for p in [
            ParamSet::ints(Variant::Degenerate, None, &[0], &[0], &[0]).unwrap(),
            ParamSet::ints(Variant::Degenerate, None, &[0], &[0, 1], &[0, 1]).unwrap(),
            ParamSet::ints(Variant::Q, Some(2), &[1], &[1, 2], &[1, 2]).unwrap(),
        ] {
            let r = completed_basis_check(&p, 2);
            assert!(r.all_pass(), "{:?}", r.failures());
        }
    }
}
