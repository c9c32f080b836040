//! DG-enhanced degenerate and q affine Hecke algebras: polynomial action,
//! normal form X^a T_w ξ^b, ξ elements and the differential ∂_Q.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Mutex;

use num_traits::{One, Zero};
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::perm::Perm;
use crate::report::{CheckRecord, Report};
use crate::scalars_params::{checked_inv, sc, show, ParamSet, Scalar, Variant};
use crate::superrings::{ext_mul_sign, exponents_up_to, mask_indices, ExtMask, Ring, SuperPoly};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeckeAlg {
    pub variant: Variant,
    pub d: usize,
    pub q: Scalar,
}

impl HeckeAlg {
    pub fn degenerate(d: usize) -> Self {
        HeckeAlg { variant: Variant::Degenerate, d, q: Scalar::one() }
    }

    pub fn q_deformed(d: usize, q: Scalar) -> Result<Self> {
        if q.is_zero() || q.is_one() {
            return Err(Error::InvalidParam("q must differ from 0 and 1".into()));
        }
        Ok(HeckeAlg { variant: Variant::Q, d, q })
    }

    pub fn from_params(p: &ParamSet) -> Self {
        HeckeAlg { variant: p.variant, d: p.d, q: p.q_value() }
    }

    pub fn ring(&self) -> Ring {
        match self.variant {
            Variant::Degenerate => Ring::HeckeP,
            Variant::Q => Ring::HeckePl,
        }
    }

    pub fn is_q(&self) -> bool {
        self.variant == Variant::Q
    }

    pub fn poly_var(&self, r: usize) -> SuperPoly {
        SuperPoly::var(self.ring(), self.d, r)
    }

    pub fn poly_const(&self, c: Scalar) -> SuperPoly {
        SuperPoly::constant(self.ring(), self.d, c)
    }

    fn normalize_input(&self, f: &SuperPoly) -> Result<SuperPoly> {
        if f.d != self.d {
            return Err(Error::RingMismatch(format!("strand count {} vs {}", f.d, self.d)));
        }
        match (&f.ring, self.variant) {
            (Ring::HeckeP, Variant::Degenerate) => Ok(f.clone()),
            (Ring::HeckeP | Ring::HeckePl, Variant::Q) => Ok(f.retag(Ring::HeckePl)),
            (r, v) => Err(Error::RingMismatch(format!("{r:?} is not a module for the {v} algebra"))),
        }
    }

    /// T_r on the polynomial representation.
    pub fn act_t(&self, r: usize, f: &SuperPoly) -> SuperPoly {
        let s = f.hecke_simple(r);
        let dd = f.divided_difference(r);
        match self.variant {
            Variant::Degenerate => {
                let mut out = s;
                out.add_assign_scaled(&dd, &sc(-1));
                out
            }
            Variant::Q => {
                let mut out = s.scale(&self.q);
                out.add_assign_scaled(&dd.mul_var(r + 1, 1), &(Scalar::one() - &self.q));
                out
            }
        }
    }

    pub fn act_letter(&self, letter: &HeckeLetter, f: &SuperPoly) -> Result<SuperPoly> {
        Ok(match letter {
            HeckeLetter::Poly(p) => {
                let p = self.normalize_input(p)?;
                if !p.is_exterior_free() {
                    return Err(Error::RingMismatch("Poly letters must be exterior-free".into()));
                }
                p.mul_unchecked(f)
            }
            HeckeLetter::T(r) => {
                self.check_t(*r)?;
                self.act_t(*r, f)
            }
            HeckeLetter::InvT(r) => {
                self.check_t(*r)?;
                self.require_q()?;
                let qi = checked_inv(&self.q)?;
                let mut out = self.act_t(*r, f);
                out.add_assign_scaled(f, &(Scalar::one() - &self.q));
                out.scale(&qi)
            }
            HeckeLetter::Theta => f.mul_ext_left(1),
            HeckeLetter::Xi(r) => {
                if *r == 0 || *r > self.d {
                    return Err(Error::IndexOutOfRange(format!("ξ_{r}")));
                }
                let mut g = f.clone();
                for l in self.xi_letters(*r).iter().rev() {
                    g = self.act_letter(l, &g)?;
                }
                g
            }
        })
    }

    fn require_q(&self) -> Result<()> {
        if self.is_q() {
            Ok(())
        } else {
            Err(Error::VariantMismatch("T^{-1} letters need the q-variant".into()))
        }
    }

    fn check_t(&self, r: usize) -> Result<()> {
        if r == 0 || r >= self.d {
            return Err(Error::IndexOutOfRange(format!("T_{r} with d = {}", self.d)));
        }
        Ok(())
    }

    /// ξ_r as a word: T_{r-1}⋯T_1 θ T_1⋯T_{r-1} (degenerate) or with inverses on the right (q).
    pub fn xi_letters(&self, r: usize) -> Vec<HeckeLetter> {
        let mut w: Vec<HeckeLetter> = (1..r).rev().map(HeckeLetter::T).collect();
        w.push(HeckeLetter::Theta);
        for k in 1..r {
            w.push(if self.is_q() { HeckeLetter::InvT(k) } else { HeckeLetter::T(k) });
        }
        w
    }

    /// Action of a word, letters applied right to left.
    pub fn act(&self, word: &HeckeWord, f: &SuperPoly) -> Result<SuperPoly> {
        let mut g = self.normalize_input(f)?;
        for l in word.letters.iter().rev() {
            g = self.act_letter(l, &g)?;
        }
        Ok(g)
    }

    pub fn act_element(&self, h: &HeckeElement, f: &SuperPoly) -> Result<SuperPoly> {
        let f = self.normalize_input(f)?;
        let mut out = f.same_shape();
        for (k, c) in &h.terms {
            let g = self.act(&HeckeWord::from_key(self, k), &f)?;
            out.add_assign_scaled(&g, c);
        }
        Ok(out)
    }

    pub fn zero(&self) -> HeckeElement {
        HeckeElement { alg: self.clone(), terms: BTreeMap::new() }
    }

    pub fn one(&self) -> HeckeElement {
        self.basis(vec![0; self.d], Perm::identity(self.d), 0)
    }

    pub fn basis(&self, exps: Vec<i32>, w: Perm, xi: ExtMask) -> HeckeElement {
        let mut h = self.zero();
        h.terms.insert(HeckeKey { exps, w, xi }, Scalar::one());
        h
    }

    pub fn from_poly(&self, p: &SuperPoly) -> Result<HeckeElement> {
        let p = self.normalize_input(p)?;
        let mut h = self.zero();
        for ((e, m), c) in &p.terms {
            if *m != 0 {
                return Err(Error::RingMismatch("polynomial part must be exterior-free".into()));
            }
            h.add_term(HeckeKey { exps: e.clone(), w: Perm::identity(self.d), xi: 0 }, c.clone());
        }
        Ok(h)
    }

    pub fn t(&self, r: usize) -> HeckeElement {
        self.basis(vec![0; self.d], Perm::simple(self.d, r), 0)
    }

    /// The element ξ_r in normal form.
    pub fn xi(&self, r: usize) -> HeckeElement {
        self.basis(vec![0; self.d], Perm::identity(self.d), 1 << (r - 1))
    }

    /// T_r·T_w in the finite Hecke algebra.
    fn t_left(&self, r: usize, w: &Perm) -> Vec<(Scalar, Perm)> {
        let sw = w.left_mul_simple(r);
        if !w.has_left_descent(r) || !self.is_q() {
            vec![(Scalar::one(), sw)]
        } else {
            vec![(&self.q - Scalar::one(), w.clone()), (self.q.clone(), sw)]
        }
    }

    /// T_w·T_r in the finite Hecke algebra.
    fn t_right(&self, w: &Perm, r: usize) -> Vec<(Scalar, Perm)> {
        let ws = w.right_mul_simple(r);
        if !w.has_right_descent(r) || !self.is_q() {
            vec![(Scalar::one(), ws)]
        } else {
            vec![(&self.q - Scalar::one(), w.clone()), (self.q.clone(), ws)]
        }
    }

    /// ξ_ℓ·T_w = Σ c·T_v·ξ_m.
    pub fn push_xi(&self, l: usize, w: &Perm) -> Vec<(Scalar, Perm, usize)> {
        let mut cur: Vec<(Scalar, Perm, usize)> = vec![(Scalar::one(), Perm::identity(self.d), l)];
        for r in w.reduced_word() {
            let mut next: BTreeMap<(Perm, usize), Scalar> = BTreeMap::new();
            let mut put = |c: Scalar, v: Perm, m: usize| {
                let e = next.entry((v, m)).or_insert_with(Scalar::zero);
                *e += c;
            };
            for (c, v, m) in cur {
                // ξ_m T_r = Σ e·T_r^{[t]} ξ_{m'} with t ∈ {0,1}
                let moves: Vec<(Scalar, bool, usize)> = if !self.is_q() {
                    let m2 = if m == r { r + 1 } else if m == r + 1 { r } else { m };
                    vec![(Scalar::one(), true, m2)]
                } else if m == r + 1 {
                    vec![(Scalar::one(), true, r)]
                } else if m == r {
                    let qm = &self.q - Scalar::one();
                    vec![(Scalar::one(), true, r + 1), (-qm.clone(), false, r + 1), (qm, false, r)]
                } else {
                    vec![(Scalar::one(), true, m)]
                };
                for (e, with_t, m2) in moves {
                    if with_t {
                        for (f, v2) in self.t_right(&v, r) {
                            put(&c * &e * f, v2, m2);
                        }
                    } else {
                        put(&c * &e, v.clone(), m2);
                    }
                }
            }
            cur = next.into_iter().filter(|(_, c)| !c.is_zero()).map(|((v, m), c)| (c, v, m)).collect();
        }
        cur
    }

    /// p · h.
    pub fn lmul_poly(&self, p: &SuperPoly, h: &HeckeElement) -> HeckeElement {
        let mut out = self.zero();
        for ((pe, _), pc) in &p.terms {
            for (k, c) in &h.terms {
                let exps: Vec<i32> = k.exps.iter().zip(pe).map(|(a, b)| a + b).collect();
                out.add_term(HeckeKey { exps, w: k.w.clone(), xi: k.xi }, c * pc);
            }
        }
        out
    }

    /// T_r · h.
    pub fn lmul_t(&self, r: usize, h: &HeckeElement) -> HeckeElement {
        let mut out = self.zero();
        for (k, c) in &h.terms {
            let p = SuperPoly::monomial(self.ring(), self.d, k.exps.clone(), 0, Scalar::one());
            let sp = p.hecke_simple(r);
            let dp = p.divided_difference(r);
            let corr = match self.variant {
                Variant::Degenerate => dp.neg(),
                Variant::Q => dp.mul_var(r + 1, 1).scale(&(Scalar::one() - &self.q)),
            };
            for (f, v) in self.t_left(r, &k.w) {
                for ((e, _), pc) in &sp.terms {
                    out.add_term(HeckeKey { exps: e.clone(), w: v.clone(), xi: k.xi }, c * &f * pc);
                }
            }
            for ((e, _), pc) in &corr.terms {
                out.add_term(HeckeKey { exps: e.clone(), w: k.w.clone(), xi: k.xi }, c * pc);
            }
        }
        out
    }

    /// T_r^{-1} · h (q-variant).
    pub fn lmul_inv_t(&self, r: usize, h: &HeckeElement) -> Result<HeckeElement> {
        self.require_q()?;
        let qi = checked_inv(&self.q)?;
        let mut out = self.lmul_t(r, h);
        out.add_scaled(h, &(Scalar::one() - &self.q));
        Ok(out.scale(&qi))
    }

    /// ξ_ℓ · T_w ξ^S summed into `out` with coefficient c and polynomial prefix exps.
    fn xi_times_tail(&self, l: usize, exps: &[i32], w: &Perm, xi: ExtMask, c: &Scalar, out: &mut HeckeElement) {
        for (f, v, m) in self.push_xi(l, w) {
            let bit = 1u32 << (m - 1);
            if let Some(s) = ext_mul_sign(bit, xi) {
                let coef = if s < 0 { -(c * &f) } else { c * &f };
                out.add_term(HeckeKey { exps: exps.to_vec(), w: v, xi: xi | bit }, coef);
            }
        }
    }

    /// θ · h.
    pub fn lmul_theta(&self, h: &HeckeElement) -> HeckeElement {
        let mut out = self.zero();
        for (k, c) in &h.terms {
            self.xi_times_tail(1, &k.exps, &k.w, k.xi, c, &mut out);
        }
        out
    }

    /// ξ_r · h.
    pub fn lmul_xi(&self, r: usize, h: &HeckeElement) -> Result<HeckeElement> {
        let mut out = self.zero();
        let mut rest = self.zero();
        for (k, c) in &h.terms {
            if k.exps.iter().all(|&x| x == 0) {
                self.xi_times_tail(r, &k.exps, &k.w, k.xi, c, &mut out);
            } else {
                rest.add_term(k.clone(), c.clone());
            }
        }
        if !rest.is_zero() {
            let mut g = rest;
            for l in self.xi_letters(r).iter().rev() {
                g = self.lmul_letter(l, &g)?;
            }
            out.add_scaled(&g, &Scalar::one());
        }
        Ok(out)
    }

    pub fn lmul_letter(&self, letter: &HeckeLetter, h: &HeckeElement) -> Result<HeckeElement> {
        match letter {
            HeckeLetter::Poly(p) => {
                let p = self.normalize_input(p)?;
                if !p.is_exterior_free() {
                    return Err(Error::RingMismatch("Poly letters must be exterior-free".into()));
                }
                if !self.is_q() && p.has_negative_exponents() {
                    return Err(Error::RingMismatch("negative exponents in the degenerate algebra".into()));
                }
                Ok(self.lmul_poly(&p, h))
            }
            HeckeLetter::T(r) => {
                self.check_t(*r)?;
                Ok(self.lmul_t(*r, h))
            }
            HeckeLetter::InvT(r) => {
                self.check_t(*r)?;
                self.lmul_inv_t(*r, h)
            }
            HeckeLetter::Theta => Ok(self.lmul_theta(h)),
            HeckeLetter::Xi(r) => {
                if *r == 0 || *r > self.d {
                    return Err(Error::IndexOutOfRange(format!("ξ_{r}")));
                }
                self.lmul_xi(*r, h)
            }
        }
    }

    /// Normal form of a word.
    pub fn straighten(&self, word: &HeckeWord) -> Result<HeckeElement> {
        let mut h = self.one();
        for l in word.letters.iter().rev() {
            h = self.lmul_letter(l, &h)?;
        }
        Ok(h)
    }

    /// Left multiplication of h by a single basis monomial.
    pub fn lmul_key(&self, k: &HeckeKey, h: &HeckeElement) -> Result<HeckeElement> {
        let word = HeckeWord::from_key(self, k);
        let mut g = h.clone();
        for l in word.letters.iter().rev() {
            g = self.lmul_letter(l, &g)?;
        }
        Ok(g)
    }

    pub fn multiply(&self, a: &HeckeElement, b: &HeckeElement) -> Result<HeckeElement> {
        if a.alg != *self || b.alg != *self {
            return Err(Error::VariantMismatch("elements of different algebras".into()));
        }
        let mut out = self.zero();
        for (k, c) in &a.terms {
            let g = self.lmul_key(k, b)?;
            out.add_scaled(&g, c);
        }
        Ok(out)
    }

    /// ∏_r (X_1 − Q_r).
    pub fn cyclotomic_poly(&self, big_q: &[Scalar]) -> SuperPoly {
        let x1 = self.poly_var(1);
        let mut p = self.poly_const(Scalar::one());
        for qr in big_q {
            let mut f = x1.clone();
            f.add_term(vec![0; self.d], 0, -qr.clone());
            p = p.mul_unchecked(&f);
        }
        p
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HeckeKey {
    pub exps: Vec<i32>,
    pub w: Perm,
    pub xi: ExtMask,
}

impl HeckeKey {
    pub fn poly_degree(&self) -> i64 {
        self.exps.iter().map(|&x| x as i64).sum()
    }

    pub fn lambda(&self) -> u32 {
        self.xi.count_ones()
    }
}

impl fmt::Display for HeckeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (k, &x) in self.exps.iter().enumerate() {
            match x {
                0 => {}
                1 => parts.push(format!("X{}", k + 1)),
                _ => parts.push(format!("X{}^{}", k + 1, x)),
            }
        }
        if !self.w.is_identity() {
            parts.push(format!("T{}", self.w));
        }
        if self.xi != 0 {
            parts.push(mask_indices(self.xi).iter().map(|r| format!("ξ{r}")).collect());
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("·"))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeckeElement {
    pub alg: HeckeAlg,
    pub terms: BTreeMap<HeckeKey, Scalar>,
}

impl HeckeElement {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, k: HeckeKey, c: Scalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(k) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &HeckeElement, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (k, x) in &other.terms {
            self.add_term(k.clone(), x * c);
        }
    }

    pub fn scale(&self, c: &Scalar) -> HeckeElement {
        let mut out = HeckeElement { alg: self.alg.clone(), terms: BTreeMap::new() };
        out.add_scaled(self, c);
        out
    }

    pub fn sub(&self, other: &HeckeElement) -> HeckeElement {
        let mut out = self.clone();
        out.add_scaled(other, &sc(-1));
        out
    }

    pub fn plus(&self, other: &HeckeElement) -> HeckeElement {
        let mut out = self.clone();
        out.add_scaled(other, &Scalar::one());
        out
    }

    pub fn max_poly_degree(&self) -> i64 {
        self.terms.keys().map(|k| k.poly_degree()).max().unwrap_or(0)
    }
}

impl fmt::Display for HeckeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| if c.is_one() { k.to_string() } else { format!("{}·{}", show(c), k) })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HeckeLetter {
    Poly(SuperPoly),
    T(usize),
    Theta,
    Xi(usize),
    InvT(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HeckeWord {
    pub letters: Vec<HeckeLetter>,
}

impl HeckeWord {
    pub fn new(letters: Vec<HeckeLetter>) -> Self {
        HeckeWord { letters }
    }

    /// The word X^a·T_{r_1}⋯T_{r_k}·ξ_{b_1}⋯ξ_{b_m} of a basis key.
    pub fn from_key(alg: &HeckeAlg, k: &HeckeKey) -> Self {
        let mut letters = Vec::new();
        if k.exps.iter().any(|&x| x != 0) {
            letters.push(HeckeLetter::Poly(SuperPoly::monomial(alg.ring(), alg.d, k.exps.clone(), 0, Scalar::one())));
        }
        letters.extend(k.w.reduced_word().into_iter().map(HeckeLetter::T));
        letters.extend(mask_indices(k.xi).into_iter().map(HeckeLetter::Xi));
        HeckeWord { letters }
    }

    pub fn max_poly_degree(&self) -> i64 {
        self.letters
            .iter()
            .map(|l| match l {
                HeckeLetter::Poly(p) => p.max_total_degree().unwrap_or(0),
                _ => 0,
            })
            .sum()
    }
}

impl fmt::Display for HeckeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|l| match l {
                HeckeLetter::Poly(p) => format!("({p})"),
                HeckeLetter::T(r) => format!("T{r}"),
                HeckeLetter::InvT(r) => format!("T{r}⁻¹"),
                HeckeLetter::Theta => "θ".to_string(),
                HeckeLetter::Xi(r) => format!("ξ{r}"),
            })
            .collect();
        write!(f, "{}", parts.join("·"))
    }
}

/// The differential ∂_Q, with ∂_Q(ξ^S) cached per subset S.
pub struct DiffQ {
    pub alg: HeckeAlg,
    pub p: SuperPoly,
    cache: Mutex<HashMap<ExtMask, HeckeElement>>,
}

impl DiffQ {
    pub fn new(alg: &HeckeAlg, big_q: &[Scalar]) -> Self {
        Self::with_poly(alg, alg.cyclotomic_poly(big_q))
    }

    /// The derivation d_P with d_P(θ) = P.
    pub fn with_poly(alg: &HeckeAlg, p: SuperPoly) -> Self {
        DiffQ { alg: alg.clone(), p: p.retag(alg.ring()), cache: Mutex::new(HashMap::new()) }
    }

    /// ∂(ξ_r) = T_{r-1}⋯T_1 P T_1^{±1}⋯T_{r-1}^{±1}.
    fn d_xi(&self, r: usize) -> Result<HeckeElement> {
        let mut letters: Vec<HeckeLetter> = (1..r).rev().map(HeckeLetter::T).collect();
        letters.push(HeckeLetter::Poly(self.p.clone()));
        for k in 1..r {
            letters.push(if self.alg.is_q() { HeckeLetter::InvT(k) } else { HeckeLetter::T(k) });
        }
        self.alg.straighten(&HeckeWord::new(letters))
    }

    /// ∂(ξ^S) by the graded Leibniz rule.
    pub fn d_xi_mono(&self, s: ExtMask) -> Result<HeckeElement> {
        if let Some(h) = self.cache.lock().unwrap().get(&s) {
            return Ok(h.clone());
        }
        let alg = &self.alg;
        let idx = mask_indices(s);
        let mut total = alg.zero();
        for (j, &r) in idx.iter().enumerate() {
            let tail_mask: ExtMask = idx[j + 1..].iter().fold(0, |m, &t| m | (1 << (t - 1)));
            let tail = alg.basis(vec![0; alg.d], Perm::identity(alg.d), tail_mask);
            let mut g = alg.multiply(&self.d_xi(r)?, &tail)?;
            for &t in idx[..j].iter().rev() {
                g = alg.lmul_xi(t, &g)?;
            }
            let sign = if j % 2 == 0 { Scalar::one() } else { sc(-1) };
            total.add_scaled(&g, &sign);
        }
        self.cache.lock().unwrap().insert(s, total.clone());
        Ok(total)
    }

    pub fn apply(&self, h: &HeckeElement) -> Result<HeckeElement> {
        let alg = &self.alg;
        let mut out = alg.zero();
        for (k, c) in &h.terms {
            if k.xi == 0 {
                continue;
            }
            let dx = self.d_xi_mono(k.xi)?;
            let head = HeckeKey { exps: k.exps.clone(), w: k.w.clone(), xi: 0 };
            let g = alg.lmul_key(&head, &dx)?;
            out.add_scaled(&g, c);
        }
        Ok(out)
    }

    /// d_P applied to a word via the Leibniz rule on letters.
    pub fn apply_word(&self, word: &HeckeWord) -> Result<HeckeElement> {
        let alg = &self.alg;
        let mut total = alg.zero();
        let mut sign = Scalar::one();
        for (pos, l) in word.letters.iter().enumerate() {
            let dl = match l {
                HeckeLetter::Theta => Some(alg.from_poly(&self.p)?),
                HeckeLetter::Xi(r) => Some(self.d_xi(*r)?),
                _ => None,
            };
            if let Some(dl) = dl {
                let right = alg.straighten(&HeckeWord::new(word.letters[pos + 1..].to_vec()))?;
                let mut g = alg.multiply(&dl, &right)?;
                for l2 in word.letters[..pos].iter().rev() {
                    g = alg.lmul_letter(l2, &g)?;
                }
                total.add_scaled(&g, &sign);
                sign = -sign;
            }
        }
        Ok(total)
    }
}

/// A relation Σ c·word = 0.
#[derive(Debug, Clone)]
pub struct Relation {
    pub id: String,
    pub terms: Vec<(Scalar, HeckeWord)>,
}

fn rel(id: impl Into<String>, terms: Vec<(i64, Vec<HeckeLetter>)>) -> Relation {
    Relation { id: id.into(), terms: terms.into_iter().map(|(c, l)| (sc(c), HeckeWord::new(l))).collect() }
}

fn rel_s(id: impl Into<String>, terms: Vec<(Scalar, Vec<HeckeLetter>)>) -> Relation {
    Relation { id: id.into(), terms: terms.into_iter().map(|(c, l)| (c, HeckeWord::new(l))).collect() }
}

/// Defining relations of the enhanced algebra, plus the ξ-relations derived from them.
pub fn defining_relations(alg: &HeckeAlg) -> Vec<Relation> {
    use HeckeLetter::*;
    let d = alg.d;
    let x = |r: usize| Poly(alg.poly_var(r));
    let q = alg.q.clone();
    let qm = &q - Scalar::one();
    let mut out = Vec::new();
    for i in 1..d {
        if alg.is_q() {
            out.push(rel_s(format!("quadratic.T{i}"), vec![
                (Scalar::one(), vec![T(i), T(i)]),
                (-qm.clone(), vec![T(i)]),
                (-q.clone(), vec![]),
            ]));
            out.push(rel(format!("inverse.T{i}"), vec![(1, vec![T(i), InvT(i)]), (-1, vec![])]));
            out.push(rel_s(format!("txt.T{i}X{i}T{i}"), vec![
                (Scalar::one(), vec![T(i), x(i), T(i)]),
                (-q.clone(), vec![x(i + 1)]),
            ]));
        } else {
            out.push(rel(format!("quadratic.T{i}"), vec![(1, vec![T(i), T(i)]), (-1, vec![])]));
            out.push(rel(format!("tx.T{i}X{i}"), vec![(1, vec![T(i), x(i)]), (-1, vec![x(i + 1), T(i)]), (1, vec![])]));
        }
        for j in 1..d {
            if j > i + 1 {
                out.push(rel(format!("commute.T{i}T{j}"), vec![(1, vec![T(i), T(j)]), (-1, vec![T(j), T(i)])]));
            }
        }
        if i + 1 < d {
            out.push(rel(format!("braid.T{i}T{}", i + 1), vec![
                (1, vec![T(i), T(i + 1), T(i)]),
                (-1, vec![T(i + 1), T(i), T(i + 1)]),
            ]));
        }
        for j in 1..=d {
            if j != i && j != i + 1 {
                out.push(rel(format!("commute.T{i}X{j}"), vec![(1, vec![T(i), x(j)]), (-1, vec![x(j), T(i)])]));
            }
        }
    }
    for i in 1..=d {
        for j in i + 1..=d {
            out.push(rel(format!("commute.X{i}X{j}"), vec![(1, vec![x(i), x(j)]), (-1, vec![x(j), x(i)])]));
        }
        if alg.is_q() {
            let inv = Poly(SuperPoly::var_pow(alg.ring(), d, i, -1));
            out.push(rel(format!("laurent.X{i}"), vec![(1, vec![x(i), inv]), (-1, vec![])]));
        }
        out.push(rel(format!("theta.X{i}"), vec![(1, vec![x(i), Theta]), (-1, vec![Theta, x(i)])]));
    }
    out.push(rel("theta.square", vec![(1, vec![Theta, Theta])]));
    for r in 2..d {
        out.push(rel(format!("theta.T{r}"), vec![(1, vec![T(r), Theta]), (-1, vec![Theta, T(r)])]));
    }
    if d >= 2 {
        let mut terms = vec![
            (Scalar::one(), vec![T(1), Theta, T(1), Theta]),
            (Scalar::one(), vec![Theta, T(1), Theta, T(1)]),
        ];
        if alg.is_q() {
            terms.push((-qm.clone(), vec![Theta, T(1), Theta]));
        }
        out.push(rel_s("theta.T1thetaT1theta", terms));
    }
    out
}

/// Consequences for the ξ elements (anticommutation and T-conjugation).
pub fn xi_relations(alg: &HeckeAlg) -> Vec<Relation> {
    use HeckeLetter::*;
    let d = alg.d;
    let qm = &alg.q - Scalar::one();
    let mut out = Vec::new();
    for l in 1..=d {
        out.push(rel(format!("xi.square{l}"), vec![(1, vec![Xi(l), Xi(l)])]));
        for r in l + 1..=d {
            out.push(rel(format!("xi.anti{l}{r}"), vec![(1, vec![Xi(r), Xi(l)]), (1, vec![Xi(l), Xi(r)])]));
        }
        for r in 1..d {
            if !alg.is_q() {
                let sl = if l == r { r + 1 } else if l == r + 1 { r } else { l };
                out.push(rel(format!("xi.T{r}xi{l}"), vec![(1, vec![T(r), Xi(l)]), (-1, vec![Xi(sl), T(r)])]));
            } else if l == r {
                out.push(rel(format!("xi.T{r}xi{l}"), vec![(1, vec![T(r), Xi(l)]), (-1, vec![Xi(r + 1), T(r)])]));
            } else if l == r + 1 {
                out.push(rel_s(format!("xi.T{r}xi{l}"), vec![
                    (Scalar::one(), vec![T(r), Xi(l)]),
                    (-Scalar::one(), vec![Xi(r), T(r)]),
                    (-qm.clone(), vec![Xi(r + 1)]),
                    (qm.clone(), vec![Xi(r)]),
                ]));
            } else {
                out.push(rel(format!("xi.T{r}xi{l}"), vec![(1, vec![T(r), Xi(l)]), (-1, vec![Xi(l), T(r)])]));
            }
        }
    }
    out
}

/// Probe monomials: X^e θ^S with |e| ≤ deg; for the q-variant also X^{e−(1,..,1)}.
pub fn hecke_probes(alg: &HeckeAlg, deg: usize) -> Vec<SuperPoly> {
    let mut exps = exponents_up_to(alg.d, deg);
    if alg.is_q() {
        let shifted: Vec<Vec<i32>> = exponents_up_to(alg.d, deg).into_iter().map(|e| e.iter().map(|x| x - 1).collect()).collect();
        exps.extend(shifted);
    }
    let mut out = Vec::new();
    for e in exps {
        for m in 0..(1u32 << alg.d) {
            out.push(SuperPoly::monomial(alg.ring(), alg.d, e.clone(), m, Scalar::one()));
        }
    }
    out
}

/// Checks one relation as an operator identity on probes and as a straightened identity.
pub fn check_relation(alg: &HeckeAlg, rel: &Relation, probes: &[SuperPoly]) -> Vec<CheckRecord> {
    let op = CheckRecord::timed(format!("hecke.{}.{}.d{}.op.{}", alg.variant, "rel", alg.d, rel.id), || {
        for p in probes {
            let mut acc = p.retag(alg.ring()).same_shape();
            for (c, w) in &rel.terms {
                acc.add_assign_scaled(&alg.act(w, p)?, c);
            }
            if !acc.is_zero() {
                return Ok(Some(format!("probe {p} ↦ {acc}")));
            }
        }
        Ok(None)
    });
    let st = CheckRecord::timed(format!("hecke.{}.{}.d{}.nf.{}", alg.variant, "rel", alg.d, rel.id), || {
        let mut acc = alg.zero();
        for (c, w) in &rel.terms {
            acc.add_scaled(&alg.straighten(w)?, c);
        }
        if acc.is_zero() {
            Ok(None)
        } else {
            Ok(Some(format!("normal form {acc}")))
        }
    });
    vec![op, st]
}

/// All defining relations and ξ-relations, as operators and in normal form.
pub fn verify_relations(alg: &HeckeAlg, max_deg: usize) -> Report {
    let probes = hecke_probes(alg, max_deg);
    let mut rels = defining_relations(alg);
    rels.extend(xi_relations(alg));
    let recs: Vec<CheckRecord> = rels.par_iter().flat_map(|r| check_relation(alg, r, &probes)).collect();
    Report::from_records(recs)
}

/// ∂_Q² = 0 on basis monomials of polynomial degree ≤ deg, and the d_P check for random P.
pub fn verify_differential(alg: &HeckeAlg, big_q: &[Scalar], deg: usize, random_p: usize, seed: u64) -> Report {
    use rand::SeedableRng;
    let dq = DiffQ::new(alg, big_q);
    let keys = basis_keys(alg, deg);
    let mut recs = Vec::new();
    let id = format!("hecke.{}.d{}.ell{}.dsquare", alg.variant, alg.d, big_q.len());
    recs.push(CheckRecord::timed(id, || {
        for k in &keys {
            let h = alg.basis(k.exps.clone(), k.w.clone(), k.xi);
            let dd = dq.apply(&dq.apply(&h)?)?;
            if !dd.is_zero() {
                return Ok(Some(format!("∂²({k}) = {dd}")));
            }
        }
        Ok(None)
    }));
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    if alg.d >= 2 {
        for n in 0..random_p {
            let p = crate::superrings::random_poly(&mut rng, &alg.ring(), alg.d, 3, 4, false);
            let id = format!("hecke.{}.d{}.dP.{n}", alg.variant, alg.d);
            recs.push(CheckRecord::timed(id, || {
                let dp = DiffQ::with_poly(alg, p.clone());
                let rel = defining_relations(alg).into_iter().find(|r| r.id == "theta.T1thetaT1theta").unwrap();
                let mut acc = alg.zero();
                for (c, w) in &rel.terms {
                    acc.add_scaled(&dp.apply_word(w)?, c);
                }
                Ok(if acc.is_zero() { None } else { Some(format!("P = {p}: {acc}")) })
            }));
        }
    }
    Report::from_records(recs)
}

/// Basis keys X^a T_w ξ^S with a ≥ 0 and |a| ≤ deg.
pub fn basis_keys(alg: &HeckeAlg, deg: usize) -> Vec<HeckeKey> {
    let mut out = Vec::new();
    for e in exponents_up_to(alg.d, deg) {
        for w in Perm::all(alg.d) {
            for m in 0..(1u32 << alg.d) {
                out.push(HeckeKey { exps: e.clone(), w: w.clone(), xi: m });
            }
        }
    }
    out
}

/// Random word over Poly(X_r), T, θ, ξ (and T^{-1} for q).
pub fn random_word<R: Rng>(rng: &mut R, alg: &HeckeAlg, len: usize) -> HeckeWord {
    let mut letters = Vec::new();
    for _ in 0..len {
        let kind = rng.gen_range(0..if alg.is_q() { 5 } else { 4 });
        let l = match kind {
            0 => {
                let r = rng.gen_range(1..=alg.d);
                let c = sc(rng.gen_range(-2..=2));
                let mut p = alg.poly_var(r);
                p.add_term(vec![0; alg.d], 0, c);
                HeckeLetter::Poly(p)
            }
            1 if alg.d >= 2 => HeckeLetter::T(rng.gen_range(1..alg.d)),
            2 => HeckeLetter::Theta,
            3 => HeckeLetter::Xi(rng.gen_range(1..=alg.d)),
            4 if alg.d >= 2 => HeckeLetter::InvT(rng.gen_range(1..alg.d)),
            _ => HeckeLetter::Theta,
        };
        letters.push(l);
    }
    HeckeWord::new(letters)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::superrings::demazure_hecke;
    use HeckeLetter::*;

    fn deg(d: usize) -> HeckeAlg {
        HeckeAlg::degenerate(d)
    }

    fn qalg(d: usize) -> HeckeAlg {
        HeckeAlg::q_deformed(d, sc(2)).unwrap()
    }

    #[test]
    fn action_examples() {
        let a = deg(2);
        let one = a.poly_const(sc(1));
        let x1 = a.poly_var(1);
        let x2 = a.poly_var(2);
        assert_eq!(a.act(&HeckeWord::new(vec![T(1)]), &one).unwrap(), one);
        let mut e = x2.clone();
        e.add_term(vec![0, 0], 0, sc(-1));
        assert_eq!(a.act(&HeckeWord::new(vec![T(1)]), &x1).unwrap(), e);
        let b = qalg(2);
        assert_eq!(b.act(&HeckeWord::new(vec![T(1)]), &x1).unwrap(), x2.retag(Ring::HeckePl));
        let t1 = SuperPoly::ext(Ring::HeckeP, 2, 1);
        let oracle = t1.hecke_simple(1).try_add(&demazure_hecke(1, &t1).unwrap().neg()).unwrap();
        assert_eq!(a.act(&HeckeWord::new(vec![T(1)]), &t1).unwrap(), oracle);
    }

    #[test]
    fn straightening_examples() {
        let a = deg(2);
        assert_eq!(a.straighten(&HeckeWord::new(vec![T(1), T(1)])).unwrap(), a.one());
        let b = qalg(2);
        let expect = b.t(1).scale(&sc(1)).plus(&b.one().scale(&sc(2)));
        assert_eq!(b.straighten(&HeckeWord::new(vec![T(1), T(1)])).unwrap(), expect);
        let x1 = Poly(a.poly_var(1));
        let got = a.straighten(&HeckeWord::new(vec![T(1), x1])).unwrap();
        let expect = a.basis(vec![0, 1], Perm::simple(2, 1), 0).sub(&a.one());
        assert_eq!(got, expect);
        let got = a.straighten(&HeckeWord::new(vec![Xi(2), Xi(1)])).unwrap();
        assert_eq!(got, a.basis(vec![0, 0], Perm::identity(2), 0b11).scale(&sc(-1)));
        assert!(a.straighten(&HeckeWord::new(vec![Xi(1), Xi(1)])).unwrap().is_zero());
        assert_eq!(a.straighten(&HeckeWord::new(vec![Xi(1)])).unwrap(), a.straighten(&HeckeWord::new(vec![Theta])).unwrap());
        // q: T_1 ξ_2 = ξ_1 T_1 + (q−1)ξ_2 − (q−1)ξ_1
        let lhs = b.straighten(&HeckeWord::new(vec![T(1), Xi(2)])).unwrap();
        let mut rhs = b.straighten(&HeckeWord::new(vec![Xi(1), T(1)])).unwrap();
        rhs.add_scaled(&b.xi(2), &sc(1));
        rhs.add_scaled(&b.xi(1), &sc(-1));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn differential_examples() {
        let a = deg(2);
        let dq = DiffQ::new(&a, &[sc(0)]);
        assert_eq!(dq.apply(&a.xi(1)).unwrap(), a.from_poly(&a.poly_var(1)).unwrap());
        assert!(dq.apply(&a.t(1)).unwrap().is_zero());
        let expect = a.straighten(&HeckeWord::new(vec![T(1), Poly(a.poly_var(1)), T(1)])).unwrap();
        assert_eq!(dq.apply(&a.xi(2)).unwrap(), expect);
        let x12 = a.basis(vec![0, 0], Perm::identity(2), 0b11);
        assert!(dq.apply(&dq.apply(&x12).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn relation_suites_small() {
        for alg in [deg(2), deg(3), qalg(2), qalg(3)] {
            let r = verify_relations(&alg, 2);
            assert!(r.all_pass(), "{:?}", r.failures());
        }
    }

    #[test]
    fn perturbed_relation_fails() {
        let a = deg(2);
        let bad = rel("perturbed", vec![(1, vec![T(1), T(1)]), (-2, vec![])]);
        let recs = check_relation(&a, &bad, &hecke_probes(&a, 1));
        assert!(recs.iter().all(|r| r.status == crate::report::Status::Fail && r.witness.is_some()));
    }

    #[test]
    fn differential_suite_small() {
        for alg in [deg(2), qalg(2)] {
            let r = verify_differential(&alg, &[sc(1), sc(2)], 2, 2, 7);
            assert!(r.all_pass(), "{:?}", r.failures());
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;
        use rand::SeedableRng;

        fn alg(q: bool, d: usize) -> HeckeAlg {
            if q {
                qalg(d)
            } else {
                deg(d)
            }
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(100))]
            #[test]
            fn straightening_preserves_the_action(seed in 0u64..100_000, q in any::<bool>(), d in 1usize..4) {
                let a = alg(q, d);
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                let w = random_word(&mut rng, &a, 5);
                let nf = a.straighten(&w).unwrap();
                for p in hecke_probes(&a, 1) {
                    prop_assert_eq!(a.act(&w, &p).unwrap(), a.act_element(&nf, &p).unwrap());
                }
            }

            #[test]
            fn differential_squares_to_zero(seed in 0u64..100_000, q in any::<bool>(), d in 1usize..4, ell in 1usize..3) {
                let a = alg(q, d);
                let big_q: Vec<Scalar> = if q { (1..=ell as i64).map(sc).collect() } else { (0..ell as i64).map(sc).collect() };
                let dq = DiffQ::new(&a, &big_q);
                let keys = basis_keys(&a, 3);
                let k = &keys[(seed as usize) % keys.len()];
                let h = a.basis(k.exps.clone(), k.w.clone(), k.xi);
                prop_assert!(dq.apply(&dq.apply(&h).unwrap()).unwrap().is_zero());
            }

            #[test]
            fn multiplication_is_associative(seed in 0u64..100_000, q in any::<bool>()) {
                let a = alg(q, 2);
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                let x = a.straighten(&random_word(&mut rng, &a, 3)).unwrap();
                let y = a.straighten(&random_word(&mut rng, &a, 3)).unwrap();
                let z = a.straighten(&random_word(&mut rng, &a, 3)).unwrap();
                let l = a.multiply(&a.multiply(&x, &y).unwrap(), &z).unwrap();
                let r = a.multiply(&x, &a.multiply(&y, &z).unwrap()).unwrap();
                prop_assert_eq!(l, r);
            }
        }
    }
}
