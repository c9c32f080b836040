//! The isomorphism α between the completed Hecke-side and KLR-side polynomial
//! modules and the algebra map γ it induces on generators.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::completion::{invert_series, truncate, HeckeCompletion, KlrCompletion, Truncated};
use crate::error::{Error, Result};
use crate::hecke_core::{defining_relations, HeckeLetter, HeckeWord};
use crate::klr_core::{klr_relations, KlrAlg, KlrElement, KlrLetter, KlrWord};
use crate::perm::Perm;
use crate::report::{CheckRecord, Report};
use crate::scalars_params::{checked_inv, sc, show_seq, ParamSet, Scalar, Variant};
use crate::superrings::{mask_indices, random_poly, ExtMask, Ring, SuperPoly};

/// Orders lost by the longest relation word, plus one.
const WORD_GUARD: i64 = 4;

/// α(θ_r 1_𝒊) for all r and 𝒊, with their inverses.
#[derive(Debug, Clone)]
pub struct AlphaTable {
    pub order: i64,
    /// theta[r−1] = Σ_𝒊 α(θ_r 1_𝒊)
    pub theta: Vec<Truncated>,
    /// omega_inv[r−1] = Σ_𝒊 α^{-1}(Ω_r 1_𝒊)
    pub omega_inv: Vec<Truncated>,
}

impl AlphaTable {
    /// P_t in α(θ_r 1_𝒊) = Σ_{t≤r} P_t Ω_t 1_𝒊.
    pub fn coefficient(&self, r: usize, t: usize, i: &[Scalar]) -> Option<SuperPoly> {
        self.theta[r - 1].comp(i).map(|p| p.ext_component(1 << (t - 1)))
    }
}

#[derive(Debug, Clone)]
enum TauData {
    /// γ(T_r)1_𝒊 = base − coef·τ_r 1_𝒊 ; γ^{-1}(τ_r)1_𝒊 = inv·(T_r − base)1_𝒊
    Equal { coef: SuperPoly, inv: SuperPoly },
    /// γ(T_r)1_𝒊 = diag 1_𝒊 + g·τ_r 1_𝒊 ; γ^{-1}(τ_r)1_𝒊 = 1_𝒕 g_inv (T_r − base) 1_𝒊
    Unequal { target: Vec<Scalar>, diag: SuperPoly, g: SuperPoly, g_inv: SuperPoly },
}

/// Both sides of the completed isomorphism at a fixed working order.
pub struct Bkr {
    pub params: ParamSet,
    pub hecke: HeckeCompletion,
    pub klr: KlrAlg,
    pub order: i64,
    pub alpha: AlphaTable,
    tau: BTreeMap<(usize, Vec<Scalar>), TauData>,
}

fn base(p: &ParamSet) -> Scalar {
    match p.variant {
        Variant::Degenerate => Scalar::one(),
        Variant::Q => p.q_value(),
    }
}

impl Bkr {
    /// Builds α and γ at working order `order`.
    pub fn new(params: &ParamSet, order: i64) -> Result<Self> {
        Self::with_sign(params, order, false)
    }

    /// `flip_sign` perturbs the sign in α(θ_1), for self-tests of the harness.
    pub fn with_sign(params: &ParamSet, order: i64, flip_sign: bool) -> Result<Self> {
        let hecke = HeckeCompletion::from_params(params)?;
        let klr = KlrAlg::from_params(params)?;
        let mut bkr = Bkr {
            params: params.clone(),
            hecke,
            klr,
            order,
            alpha: AlphaTable { order, theta: vec![], omega_inv: vec![] },
            tau: BTreeMap::new(),
        };
        bkr.alpha = bkr.build_alpha(order + params.d as i64 - 1, flip_sign)?;
        bkr.build_tau()?;
        Ok(bkr)
    }

    pub fn d(&self) -> usize {
        self.params.d
    }

    pub fn is_q(&self) -> bool {
        self.params.variant == Variant::Q
    }

    pub fn points(&self) -> &[Vec<Scalar>] {
        &self.hecke.points
    }

    fn kappa(&self, i: &[Scalar], r: usize) -> Scalar {
        if self.is_q() {
            i[r - 1].clone()
        } else {
            Scalar::one()
        }
    }

    /// α′ on an exterior-free shifted series at 𝒊: x_r ↦ κ_r Y_r.
    pub fn alpha_prime_comp(&self, f: &SuperPoly, i: &[Scalar]) -> SuperPoly {
        let ring = self.klr.ring(i);
        let mut out = SuperPoly::zero(ring, self.d());
        for ((e, m), c) in &f.terms {
            let mut c = c.clone();
            for (r, &k) in e.iter().enumerate() {
                c *= num_traits::pow(self.kappa(i, r + 1), k as usize);
            }
            out.add_term(e.clone(), *m, c);
        }
        out
    }

    /// α′^{-1}: Y_r ↦ x_r/κ_r.
    pub fn alpha_prime_inv_comp(&self, f: &SuperPoly, i: &[Scalar]) -> Result<SuperPoly> {
        let mut out = SuperPoly::zero(self.hecke.ring(), self.d());
        for ((e, m), c) in &f.terms {
            let mut c = c.clone();
            for (r, &k) in e.iter().enumerate() {
                c *= checked_inv(&num_traits::pow(self.kappa(i, r + 1), k as usize))?;
            }
            out.add_term(e.clone(), *m, c);
        }
        Ok(out)
    }

    /// α′ of a polynomial in X (Laurent for the q-variant), at 𝒊.
    pub fn alpha_prime_x(&self, f: &SuperPoly, i: &[Scalar], order: i64) -> Result<SuperPoly> {
        let f = if self.is_q() { f.retag(Ring::HeckePl) } else { f.clone() };
        Ok(self.alpha_prime_comp(&truncate(&f, i, order)?, i))
    }

    /// α′ on a whole truncated exterior-free element.
    pub fn alpha_prime(&self, f: &Truncated) -> Result<Truncated> {
        if f.max_ext_degree() > 0 {
            return Err(Error::InvalidParam("alpha_prime takes exterior-free input".into()));
        }
        let mut out = Truncated::zero(f.d, f.order);
        for (i, p) in &f.comps {
            out.add_comp(i.clone(), &self.alpha_prime_comp(p, i), &Scalar::one());
        }
        Ok(out)
    }

    fn x_poly(&self, r: usize) -> SuperPoly {
        SuperPoly::var(self.hecke.ring(), self.d(), r)
    }

    fn x_const(&self, c: Scalar) -> SuperPoly {
        SuperPoly::constant(self.hecke.ring(), self.d(), c)
    }

    /// α′(X_r − X_{r+1}) at 𝒊.
    fn den(&self, i: &[Scalar], r: usize, order: i64) -> Result<SuperPoly> {
        let mut p = self.x_poly(r);
        p.add_assign_scaled(&self.x_poly(r + 1), &sc(-1));
        self.alpha_prime_x(&p, i, order)
    }

    /// α′(X_r − X_{r+1} + 1) or α′(qX_r − X_{r+1}) at 𝒊.
    fn num(&self, i: &[Scalar], r: usize, order: i64) -> Result<SuperPoly> {
        let mut p = match self.params.variant {
            Variant::Degenerate => {
                let mut p = self.x_poly(r);
                p.add_assign_scaled(&self.x_const(Scalar::one()), &Scalar::one());
                p
            }
            Variant::Q => self.x_poly(r).scale(&self.params.q_value()),
        };
        p.add_assign_scaled(&self.x_poly(r + 1), &sc(-1));
        self.alpha_prime_x(&p, i, order)
    }

    /// Transported Demazure operator on the KLR side.
    fn transported_demazure(&self, r: usize, g: &Truncated) -> Result<Truncated> {
        let kc = KlrCompletion::new(&self.klr);
        let loss = i64::from(self.points().iter().any(|i| i[r - 1] == i[r]));
        let order = g.order - loss;
        let sg = kc.reflect(r, g);
        let mut out = Truncated::zero(g.d, order);
        for i in self.points() {
            if i[r - 1] == i[r] {
                if let Some(gi) = g.comp(i) {
                    let k = checked_inv(&self.kappa(i, r))?;
                    out.add_comp(i.clone(), &gi.divided_difference(r), &k);
                }
                continue;
            }
            let mut h = g.comp(i).cloned().unwrap_or_else(|| SuperPoly::zero(self.klr.ring(i), self.d()));
            if let Some(s) = sg.comp(i) {
                h.add_assign_scaled(s, &sc(-1));
            }
            if h.is_zero() {
                continue;
            }
            let inv = invert_series(&self.den(i, r, g.order)?, g.order)?;
            out.add_comp(i.clone(), &h.mul_truncated(&inv, Some(order)), &Scalar::one());
        }
        Ok(out)
    }

    /// Exterior-free factor A with α(θ_1 1_𝒊) = A·Ω_1 1_𝒊.
    pub fn theta1_factor(&self, i: &[Scalar], order: i64, flip_sign: bool) -> Result<SuperPoly> {
        let p = &self.params;
        let i1 = &i[0];
        let ring = self.klr.ring(i);
        let d = self.d();
        let y1 = SuperPoly::var(ring.clone(), d, 1);
        let mut out = SuperPoly::one(ring.clone(), d);
        for v in &p.vertices {
            let lam = p.lambda_of(v);
            if v == i1 || lam == 0 {
                continue;
            }
            // Y_1 + i_1 − i, resp. i_1(Y_1+1) − i
            let f = match p.variant {
                Variant::Degenerate => {
                    let mut f = y1.clone();
                    f.add_term(vec![0; d], 0, i1 - v);
                    f
                }
                Variant::Q => {
                    let mut f = y1.scale(i1);
                    f.add_term(vec![0; d], 0, i1 - v);
                    f
                }
            };
            out = out.mul_truncated(&f.pow(lam as u32), Some(order));
        }
        let lam = p.lambda_of(i1) as usize;
        let mut sign = match p.variant {
            Variant::Degenerate => num_traits::pow(sc(-1), lam),
            Variant::Q => num_traits::pow(-i1.clone(), lam),
        };
        if flip_sign {
            sign = -sign;
        }
        Ok(out.scale(&sign))
    }

    fn build_alpha(&self, order: i64, flip_sign: bool) -> Result<AlphaTable> {
        let d = self.d();
        let mut first = Truncated::zero(d, order);
        for i in self.points() {
            let a = self.theta1_factor(i, order, flip_sign)?;
            first.add_comp(i.clone(), &a.mul_ext_left(1), &Scalar::one());
        }
        let mut theta = vec![first];
        for r in 2..=d {
            let prev = &theta[r - 2];
            theta.push(self.transported_demazure(r - 1, prev)?.scale(&sc(-1)));
        }
        let table_order = theta.iter().map(|t| t.order).min().unwrap_or(order);
        // back-substitution along the triangular form
        let mut omega_inv: Vec<Truncated> = Vec::new();
        for r in 1..=d {
            let mut acc = Truncated::zero(d, table_order);
            for i in self.points() {
                let Some(ar) = theta[r - 1].comp(i) else {
                    return Err(Error::NotInvertible(format!("α(θ_{r}) vanishes at {}", show_seq(i))));
                };
                let lead = self.alpha_prime_inv_comp(&ar.ext_component(1 << (r - 1)), i)?;
                let lead_inv = invert_series(&lead, table_order)?;
                let mut num = SuperPoly::ext(self.hecke.ring(), d, r);
                for (t, om) in omega_inv.iter().enumerate() {
                    let pt = self.alpha_prime_inv_comp(&ar.ext_component(1 << t), i)?;
                    if let Some(b) = om.comp(i) {
                        num.add_assign_scaled(&pt.mul_truncated(b, Some(table_order)), &sc(-1));
                    }
                }
                acc.add_comp(i.clone(), &lead_inv.mul_truncated(&num, Some(table_order)), &Scalar::one());
            }
            omega_inv.push(acc);
        }
        Ok(AlphaTable { order: table_order, theta, omega_inv })
    }

    fn build_tau(&mut self) -> Result<()> {
        let order = self.alpha.order;
        let b = base(&self.params);
        for r in 1..self.d() {
            for i in self.points().to_vec() {
                let data = if i[r - 1] == i[r] {
                    let k = self.kappa(&i, r);
                    let num = self.num(&i, r, order)?;
                    let coef = num.scale(&checked_inv(&k)?);
                    let inv = invert_series(&self.alpha_prime_inv_comp(&num, &i)?, order)?.scale(&(-k));
                    TauData::Equal { coef, inv }
                } else {
                    let t = Perm::simple(self.d(), r).act_seq(&i);
                    let c_i = self.num(&i, r, order)?.mul_truncated(&invert_series(&self.den(&i, r, order)?, order)?, Some(order));
                    let mut diag = c_i.neg();
                    diag.add_term(vec![0; self.d()], 0, b.clone());
                    let num_t = self.num(&t, r, order)?;
                    let den_t = self.den(&t, r, order)?;
                    let (g, g_inv) = if self.klr.h(&i[r - 1], &i[r]) == 0 {
                        // π = 1
                        let g = num_t.mul_truncated(&invert_series(&den_t, order)?, Some(order));
                        let g_inv = den_t.mul_truncated(&invert_series(&num_t, order)?, Some(order));
                        (g, g_inv)
                    } else {
                        // num_t = λ·(Y_{r+1} − Y_r)
                        let lam = linear_quotient(&num_t, r)?;
                        let g = invert_series(&den_t, order)?.scale(&lam);
                        let g_inv = den_t.scale(&checked_inv(&lam)?);
                        (g, g_inv)
                    };
                    let g_inv = self.alpha_prime_inv_comp(&g_inv, &t)?;
                    TauData::Unequal { target: t, diag, g, g_inv }
                };
                self.tau.insert((r, i), data);
            }
        }
        Ok(())
    }

    /// α on a Hecke-side truncated element (multiplicative extension).
    pub fn alpha_apply(&self, f: &Truncated) -> Result<Truncated> {
        let order = f.order.min(self.alpha.order);
        let mut out = Truncated::zero(f.d, order);
        for (i, p) in &f.comps {
            let mut by_mask: BTreeMap<ExtMask, SuperPoly> = BTreeMap::new();
            for ((e, m), c) in &p.terms {
                by_mask.entry(*m).or_insert_with(|| SuperPoly::zero(self.hecke.ring(), self.d())).add_term(e.clone(), 0, c.clone());
            }
            for (m, poly) in by_mask {
                let mut img = self.alpha_prime_comp(&poly, i);
                for s in mask_indices(m) {
                    let Some(t) = self.alpha.theta[s - 1].comp(i) else {
                        img = img.same_shape();
                        break;
                    };
                    img = img.mul_truncated(t, Some(order));
                }
                out.add_comp(i.clone(), &img, &Scalar::one());
            }
        }
        Ok(out)
    }

    /// α^{-1} on a KLR-side truncated element.
    pub fn alpha_inverse(&self, g: &Truncated) -> Result<Truncated> {
        let order = g.order.min(self.alpha.order);
        let mut out = Truncated::zero(g.d, order);
        for (i, p) in &g.comps {
            let mut by_mask: BTreeMap<ExtMask, SuperPoly> = BTreeMap::new();
            for ((e, m), c) in &p.terms {
                by_mask.entry(*m).or_insert_with(|| SuperPoly::zero(p.ring.clone(), self.d())).add_term(e.clone(), 0, c.clone());
            }
            for (m, poly) in by_mask {
                let mut img = self.alpha_prime_inv_comp(&poly, i)?;
                for s in mask_indices(m) {
                    let Some(t) = self.alpha.omega_inv[s - 1].comp(i) else {
                        img = img.same_shape();
                        break;
                    };
                    img = img.mul_truncated(t, Some(order));
                }
                out.add_comp(i.clone(), &img, &Scalar::one());
            }
        }
        Ok(out)
    }

    fn klr_tau(&self, r: usize, f: &Truncated) -> Result<Truncated> {
        KlrCompletion::new(&self.klr).act_letter(&KlrLetter::Tau(r), f)
    }

    /// γ(T_r) acting on the KLR side.
    pub fn gamma_t(&self, r: usize, f: &Truncated) -> Result<Truncated> {
        let b = base(&self.params);
        let tf = self.klr_tau(r, f)?;
        let mut out = Truncated::zero(f.d, tf.order.min(self.alpha.order));
        for (i, p) in &f.comps {
            match &self.tau[&(r, i.clone())] {
                TauData::Equal { coef, .. } => {
                    out.add_comp(i.clone(), p, &b);
                    if let Some(ti) = tf.comp(i) {
                        out.add_comp(i.clone(), &coef.mul_truncated(ti, Some(out.order)), &sc(-1));
                    }
                }
                TauData::Unequal { target, diag, g, .. } => {
                    out.add_comp(i.clone(), &diag.mul_truncated(p, Some(out.order)), &Scalar::one());
                    // τ_r maps the 𝒊-component to the 𝒕-component only
                    let ti = self.klr_tau(r, &Truncated::single(i.clone(), p.clone(), f.order))?;
                    if let Some(tt) = ti.comp(target) {
                        out.add_comp(target.clone(), &g.mul_truncated(tt, Some(out.order)), &Scalar::one());
                    }
                }
            }
        }
        Ok(out)
    }

    /// γ of a Hecke letter acting on the KLR side.
    pub fn gamma_letter(&self, l: &HeckeLetter, f: &Truncated) -> Result<Truncated> {
        match l {
            HeckeLetter::Poly(p) => {
                let mut out = Truncated::zero(f.d, f.order.min(self.alpha.order));
                for (i, g) in &f.comps {
                    let hp = self.hecke.embed(p, i, out.order)?;
                    let img = self.alpha_apply(&hp)?;
                    if let Some(c) = img.comp(i) {
                        out.add_comp(i.clone(), &c.mul_truncated(g, Some(out.order)), &Scalar::one());
                    }
                }
                Ok(out)
            }
            HeckeLetter::Theta => {
                let mut out = Truncated::zero(f.d, f.order.min(self.alpha.order));
                for (i, g) in &f.comps {
                    if let Some(c) = self.alpha.theta[0].comp(i) {
                        out.add_comp(i.clone(), &c.mul_truncated(g, Some(out.order)), &Scalar::one());
                    }
                }
                Ok(out)
            }
            HeckeLetter::T(r) => self.gamma_t(*r, f),
            HeckeLetter::InvT(r) => {
                if !self.is_q() {
                    return Err(Error::VariantMismatch("T^{-1} letters need the q-variant".into()));
                }
                let q = self.params.q_value();
                let mut out = self.gamma_t(*r, f)?;
                out.add_scaled(f, &(Scalar::one() - &q));
                Ok(out.scale(&checked_inv(&q)?))
            }
            HeckeLetter::Xi(r) => {
                let mut g = f.clone();
                for x in self.hecke.alg.xi_letters(*r).iter().rev() {
                    g = self.gamma_letter(x, &g)?;
                }
                Ok(g)
            }
        }
    }

    pub fn gamma_word(&self, w: &HeckeWord, f: &Truncated) -> Result<Truncated> {
        let mut g = f.clone();
        for l in w.letters.iter().rev() {
            g = self.gamma_letter(l, &g)?;
        }
        Ok(g)
    }

    /// γ^{-1} of a KLR letter acting on the Hecke side.
    pub fn gamma_inv_letter(&self, l: &KlrLetter, f: &Truncated) -> Result<Truncated> {
        let order = f.order.min(self.alpha.order);
        let mut out = Truncated::zero(f.d, order);
        match l {
            KlrLetter::Dot(r) => {
                for (i, g) in &f.comps {
                    let k = checked_inv(&self.kappa(i, *r))?;
                    out.add_comp(i.clone(), &g.mul_var(*r, 1), &k);
                }
            }
            KlrLetter::FloatingDot => {
                for (i, g) in &f.comps {
                    if let Some(c) = self.alpha.omega_inv[0].comp(i) {
                        out.add_comp(i.clone(), &c.mul_truncated(g, Some(order)), &Scalar::one());
                    }
                }
            }
            KlrLetter::Tau(r) => {
                let b = base(&self.params);
                for (i, g) in &f.comps {
                    let src = Truncated::single(i.clone(), g.clone(), f.order);
                    let mut tg = self.hecke.act_t(*r, &src)?;
                    tg.add_scaled(&src, &(-b.clone()));
                    out = out.truncated_to(tg.order);
                    match &self.tau[&(*r, i.clone())] {
                        TauData::Equal { inv, .. } => {
                            if let Some(c) = tg.comp(i) {
                                out.add_comp(i.clone(), &inv.mul_truncated(c, Some(out.order)), &Scalar::one());
                            }
                        }
                        TauData::Unequal { target, g_inv, .. } => {
                            if let Some(c) = tg.comp(target) {
                                out.add_comp(target.clone(), &g_inv.mul_truncated(c, Some(out.order)), &Scalar::one());
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn gamma_inv_word(&self, w: &KlrWord, f: &Truncated) -> Result<Truncated> {
        let mut g = f.project(&w.source);
        for l in w.letters.iter().rev() {
            g = self.gamma_inv_letter(l, &g)?;
        }
        Ok(g)
    }

    pub fn gamma_inv_element(&self, e: &KlrElement, f: &Truncated) -> Result<Truncated> {
        let mut out: Option<Truncated> = None;
        for (w, c) in &e.terms {
            let g = self.gamma_inv_word(w, f)?;
            match &mut out {
                None => out = Some(g.scale(c)),
                Some(o) => o.add_scaled(&g, c),
            }
        }
        Ok(out.unwrap_or_else(|| Truncated::zero(f.d, f.order)))
    }

    /// Random truncated element with components at every orbit point.
    pub fn random_hecke(&self, rng: &mut ChaCha8Rng, max_deg: usize) -> Truncated {
        let mut t = Truncated::zero(self.d(), self.order);
        for i in self.points() {
            t.add_comp(i.clone(), &random_poly(rng, &self.hecke.ring(), self.d(), max_deg, 3, true), &Scalar::one());
        }
        t
    }

    pub fn random_klr(&self, rng: &mut ChaCha8Rng, max_deg: usize) -> Truncated {
        let mut t = Truncated::zero(self.d(), self.order);
        for i in self.points() {
            t.add_comp(i.clone(), &random_poly(rng, &self.klr.ring(i), self.d(), max_deg, 3, true), &Scalar::one());
        }
        t
    }
}

/// λ with f = λ·(Y_{r+1} − Y_r), else NotInvertible.
fn linear_quotient(f: &SuperPoly, r: usize) -> Result<Scalar> {
    let mut e = vec![0; f.d];
    e[r] = 1;
    let lam = f.coeff(&e, 0);
    let mut lin = SuperPoly::var(f.ring.clone(), f.d, r + 1);
    lin.add_assign_scaled(&SuperPoly::var(f.ring.clone(), f.d, r), &sc(-1));
    if lam.is_zero() || *f != lin.scale(&lam) {
        return Err(Error::NotInvertible(format!("{f} is not a multiple of Y_{} − Y_{r}", r + 1)));
    }
    Ok(lam)
}

fn mismatch(lhs: &Truncated, rhs: &Truncated, n: i64) -> Result<Option<String>> {
    if lhs.agrees_to(rhs, n)? {
        Ok(None)
    } else {
        Ok(Some(format!("difference {}", lhs.truncated_to(n).sub(&rhs.truncated_to(n)))))
    }
}

/// Runs the five verification groups at truncation order N.
pub fn verify_bkr(p: &ParamSet, n: usize, samples: usize, seed: u64) -> Report {
    verify_bkr_with(p, n, samples, seed, false)
}

/// As [`verify_bkr`], optionally with the sign of α(θ_1) perturbed.
pub fn verify_bkr_with(p: &ParamSet, n: usize, samples: usize, seed: u64, flip_sign: bool) -> Report {
    let id = format!("bkr.{}.d{}.a{}.N{n}", p.variant, p.d, show_seq(&p.a));
    let n = n as i64;
    let bkr = match Bkr::with_sign(p, n + WORD_GUARD, flip_sign) {
        Ok(b) => b,
        Err(e) => return Report::from_records(vec![CheckRecord::error(format!("{id}.build"), e.to_string())]),
    };
    let d = p.d;
    let mut tasks: Vec<(String, Box<dyn Fn() -> Result<Option<String>> + Send + Sync + '_>)> = Vec::new();
    let bkr = &bkr;

    // (1) 𝔖_d-invariance on generators
    for k in 1..d {
        for r in 1..=d {
            tasks.push((
                format!("{id}.sd_invariance.s{k}.theta{r}"),
                Box::new(move || {
                    let kc = KlrCompletion::new(&bkr.klr);
                    for i in bkr.points() {
                        let th = bkr.hecke.monomial(i, vec![0; d], 1 << (r - 1), bkr.order);
                        let lhs = kc.reflect(k, &bkr.alpha_apply(&th)?);
                        let rhs = bkr.alpha_apply(&bkr.hecke.reflect(k, &th))?;
                        if let Some(w) = mismatch(&lhs, &rhs, n)? {
                            return Ok(Some(format!("at 1_{}: {w}", show_seq(i))));
                        }
                    }
                    Ok(None)
                }),
            ));
        }
    }

    // (2) intertwining on generators, both directions
    let mut hecke_gens: Vec<(String, HeckeLetter)> = (1..=d).map(|r| (format!("X{r}"), HeckeLetter::Poly(bkr.x_poly(r)))).collect();
    if bkr.is_q() {
        for r in 1..=d {
            hecke_gens.push((format!("Xinv{r}"), HeckeLetter::Poly(SuperPoly::var_pow(Ring::HeckePl, d, r, -1))));
        }
        for r in 1..d {
            hecke_gens.push((format!("Tinv{r}"), HeckeLetter::InvT(r)));
        }
    }
    for r in 1..d {
        hecke_gens.push((format!("T{r}"), HeckeLetter::T(r)));
    }
    hecke_gens.push(("theta".into(), HeckeLetter::Theta));
    for (name, l) in hecke_gens {
        tasks.push((
            format!("{id}.intertwine.hecke.{name}"),
            Box::new(move || {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut inputs: Vec<Truncated> = bkr.hecke.probes(1, bkr.order);
                inputs.extend((0..samples).map(|_| bkr.random_hecke(&mut rng, 2)));
                for f in inputs {
                    let lhs = bkr.alpha_apply(&bkr.hecke.act_letter(&l, &f)?)?;
                    let rhs = bkr.gamma_letter(&l, &bkr.alpha_apply(&f)?)?;
                    if let Some(w) = mismatch(&lhs, &rhs, n)? {
                        return Ok(Some(format!("on {f}: {w}")));
                    }
                }
                Ok(None)
            }),
        ));
    }
    let mut klr_gens: Vec<(String, KlrLetter)> = (1..=d).map(|r| (format!("Y{r}"), KlrLetter::Dot(r))).collect();
    for r in 1..d {
        klr_gens.push((format!("tau{r}"), KlrLetter::Tau(r)));
    }
    klr_gens.push(("Omega".into(), KlrLetter::FloatingDot));
    for (name, l) in klr_gens {
        tasks.push((
            format!("{id}.intertwine.klr.{name}"),
            Box::new(move || {
                let kc = KlrCompletion::new(&bkr.klr);
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5a5a);
                let mut inputs: Vec<Truncated> = kc.probes(1, bkr.order);
                inputs.extend((0..samples).map(|_| bkr.random_klr(&mut rng, 2)));
                for v in inputs {
                    let lhs = bkr.alpha_inverse(&kc.act_letter(&l, &v)?)?;
                    let rhs = bkr.gamma_inv_letter(&l, &bkr.alpha_inverse(&v)?)?;
                    if let Some(w) = mismatch(&lhs, &rhs, n)? {
                        return Ok(Some(format!("on {v}: {w}")));
                    }
                }
                Ok(None)
            }),
        ));
    }

    // (3) relation images vanish on probes
    let probe_deg = (n - 1).max(0) as usize;
    for rel in defining_relations(&bkr.hecke.alg) {
        tasks.push((
            format!("{id}.relation.hecke.{}", rel.id),
            Box::new(move || {
                let kc = KlrCompletion::new(&bkr.klr);
                for v in kc.probes(probe_deg, bkr.order) {
                    let mut acc: Option<Truncated> = None;
                    for (c, w) in &rel.terms {
                        let g = bkr.gamma_word(w, &v)?;
                        match &mut acc {
                            None => acc = Some(g.scale(c)),
                            Some(a) => a.add_scaled(&g, c),
                        }
                    }
                    let acc = acc.unwrap_or_else(|| Truncated::zero(d, bkr.order));
                    if let Some(w) = mismatch(&acc, &Truncated::zero(d, n), n)? {
                        return Ok(Some(format!("on {v}: {w}")));
                    }
                }
                Ok(None)
            }),
        ));
    }
    for i in bkr.points() {
        let rels = match klr_relations(&bkr.klr, i) {
            Ok(r) => r,
            Err(e) => {
                tasks.push((format!("{id}.relation.klr.{}", show_seq(i)), Box::new(move || Err(Error::Internal(e.to_string())))));
                continue;
            }
        };
        for rel in rels {
            tasks.push((
                format!("{id}.relation.klr.{}", rel.id),
                Box::new(move || {
                    for f in bkr.hecke.probes(probe_deg, bkr.order) {
                        let g = bkr.gamma_inv_element(&rel.element, &f)?;
                        if let Some(w) = mismatch(&g, &Truncated::zero(d, n), n)? {
                            return Ok(Some(format!("on {f}: {w}")));
                        }
                    }
                    Ok(None)
                }),
            ));
        }
    }

    // (4) γ(∂_Q θ) = d_Λ(γ θ) per component
    tasks.push((
        format!("{id}.dg_compatibility"),
        Box::new(move || {
            let lam = bkr.params.lambda();
            let cyc = bkr.hecke.alg.cyclotomic_poly(&bkr.params.big_q);
            for i in bkr.points() {
                let lhs = bkr.alpha_prime_x(&cyc, i, n)?;
                let a = bkr.theta1_factor_from_table(i)?;
                let e = KlrElement::from_poly(i, &a)?.mul(&KlrElement::from_word(KlrWord::new(i.clone(), vec![KlrLetter::FloatingDot])));
                let de = bkr.klr.d_lambda_words(&e, &lam);
                let img = bkr.klr.act_element(&de, &SuperPoly::one(bkr.klr.ring(i), d))?;
                let rhs = img.get(i).cloned().unwrap_or_else(|| SuperPoly::zero(bkr.klr.ring(i), d)).keep_below_degree(n);
                if lhs.keep_below_degree(n) != rhs {
                    return Ok(Some(format!("at 1_{}: γ(∂θ) = {} but d(γθ) = {}", show_seq(i), lhs.render("Y", "Ω"), rhs.render("Y", "Ω"))));
                }
            }
            Ok(None)
        }),
    ));

    // (5) triangular invertibility
    tasks.push((
        format!("{id}.triangular"),
        Box::new(move || {
            for i in bkr.points() {
                for r in 1..=d {
                    let Some(t) = bkr.alpha.theta[r - 1].comp(i) else {
                        return Ok(Some(format!("α(θ_{r}) = 0 at 1_{}", show_seq(i))));
                    };
                    for (_, m) in t.terms.keys() {
                        if m.count_ones() != 1 || mask_indices(*m)[0] > r {
                            return Ok(Some(format!("α(θ_{r}) at 1_{} is not triangular: {}", show_seq(i), t.render("Y", "Ω"))));
                        }
                    }
                    let lead = t.ext_component(1 << (r - 1));
                    if lead.constant_term().is_zero() {
                        return Ok(Some(format!("P_{r} = {} at 1_{} is not invertible", lead.render("Y", "Ω"), show_seq(i))));
                    }
                }
            }
            Ok(None)
        }),
    ));

    let records: Vec<CheckRecord> = tasks.into_par_iter().map(|(name, f)| CheckRecord::timed(name, f)).collect();
    Report::from_records(records)
}

impl Bkr {
    /// The exterior-free factor of the stored α(θ_1 1_𝒊).
    pub fn theta1_factor_from_table(&self, i: &[Scalar]) -> Result<SuperPoly> {
        self.alpha.theta[0]
            .comp(i)
            .map(|p| p.ext_component(1))
            .ok_or_else(|| Error::NotInvertible(format!("α(θ_1) vanishes at {}", show_seq(i))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars_params::ParamSet;

    fn deg(big_q: &[i64], a: &[i64], v: &[i64]) -> ParamSet {
        ParamSet::ints(Variant::Degenerate, None, big_q, a, v).unwrap()
    }

    #[test]
    fn theta1_examples() {
        // I = {0,1}, i_1 = 0, Λ_0 = 0, Λ_1 = 1: (Y_1 − 1)Ω_1
        let b = Bkr::new(&deg(&[1], &[0], &[0, 1]), 3).unwrap();
        let a = b.theta1_factor_from_table(&[sc(0)]).unwrap();
        let mut e = SuperPoly::var(b.klr.ring(&[sc(0)]), 1, 1);
        e.add_term(vec![0], 0, sc(-1));
        assert_eq!(a, e);
        // empty product: (−1)^{Λ_{i_1}}
        let b = Bkr::new(&deg(&[0, 0, 0], &[0], &[0]), 3).unwrap();
        assert_eq!(b.theta1_factor_from_table(&[sc(0)]).unwrap(), SuperPoly::constant(b.klr.ring(&[sc(0)]), 1, sc(-1)));
    }

    #[test]
    fn alpha_prime_examples() {
        let b = Bkr::new(&deg(&[0], &[0, 1], &[0, 1]), 3).unwrap();
        let i = vec![sc(1), sc(0)];
        let got = b.alpha_prime_x(&SuperPoly::var(Ring::HeckeP, 2, 1), &i, 3).unwrap();
        let mut e = SuperPoly::var(b.klr.ring(&i), 2, 1);
        e.add_term(vec![0, 0], 0, sc(1));
        assert_eq!(got, e);
        let p = ParamSet::ints(Variant::Q, Some(2), &[1], &[1, 2], &[1, 2]).unwrap();
        let b = Bkr::new(&p, 3).unwrap();
        let i = vec![sc(2), sc(1)];
        let got = b.alpha_prime_x(&SuperPoly::var(Ring::HeckePl, 2, 1), &i, 3).unwrap();
        let mut e = SuperPoly::var(b.klr.ring(&i), 2, 1).scale(&sc(2));
        e.add_term(vec![0, 0], 0, sc(2));
        assert_eq!(got, e);
    }

    #[test]
    fn alpha_round_trip() {
        let b = Bkr::new(&deg(&[0], &[0, 0], &[0, 1]), 5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let f = b.random_hecke(&mut rng, 3);
            let g = b.alpha_inverse(&b.alpha_apply(&f).unwrap()).unwrap();
            assert!(g.agrees_to(&f, 5).unwrap());
        }
    }

    #[test]
    fn small_suites_pass() {
        for p in [
            deg(&[0], &[0], &[0, 1]),
            deg(&[0], &[0, 1], &[0, 1]),
            deg(&[0], &[0, 0], &[0, 1]),
            ParamSet::ints(Variant::Q, Some(2), &[1], &[1, 2], &[1, 2]).unwrap(),
        ] {
            let r = verify_bkr(&p, 2, 2, 1);
            assert!(r.all_pass(), "{}: {:#?}", p.describe(), r.failures());
        }
    }

    #[test]
    fn perturbed_sign_is_caught() {
        let r = verify_bkr_with(&deg(&[0], &[0, 1], &[0, 1]), 2, 1, 1, true);
        let bad: Vec<_> = r.failures().iter().map(|c| c.check_id.clone()).collect();
        assert!(bad.iter().any(|id| id.ends_with("dg_compatibility")), "{bad:?}");
    }
}
