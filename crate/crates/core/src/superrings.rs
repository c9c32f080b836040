//! Sparse super-polynomials: (Laurent) monomials times a sorted exterior monomial.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::perm::Perm;
use crate::scalars_params::{sc, show, show_seq, Scalar};

/// Which ring an element lives in. KLR elements carry their idempotent label.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ring {
    HeckeP,
    HeckePl,
    Klr(Vec<Scalar>),
}

impl Ring {
    pub fn is_klr(&self) -> bool {
        matches!(self, Ring::Klr(_))
    }

    pub fn label(&self) -> Option<&[Scalar]> {
        match self {
            Ring::Klr(l) => Some(l),
            _ => None,
        }
    }
}

/// Exterior monomial: bit r-1 set means θ_r (resp. Ω_r) is present.
pub type ExtMask = u32;
pub type Mono = (Vec<i32>, ExtMask);

/// Sign of θ^A·θ^B after sorting, or None when A and B overlap.
pub fn ext_mul_sign(a: ExtMask, b: ExtMask) -> Option<i32> {
    if a & b != 0 {
        return None;
    }
    let mut swaps = 0u32;
    let mut bb = b;
    while bb != 0 {
        let j = bb.trailing_zeros();
        swaps += (a >> (j + 1)).count_ones();
        bb &= bb - 1;
    }
    Some(if swaps % 2 == 0 { 1 } else { -1 })
}

pub fn mask_of(indices: &[usize]) -> ExtMask {
    indices.iter().fold(0, |m, &r| m | (1 << (r - 1)))
}

pub fn mask_indices(m: ExtMask) -> Vec<usize> {
    (0..32).filter(|b| m >> b & 1 == 1).map(|b| b as usize + 1).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperPoly {
    pub ring: Ring,
    pub d: usize,
    pub terms: BTreeMap<Mono, Scalar>,
}

impl SuperPoly {
    pub fn zero(ring: Ring, d: usize) -> Self {
        SuperPoly { ring, d, terms: BTreeMap::new() }
    }

    pub fn constant(ring: Ring, d: usize, c: Scalar) -> Self {
        Self::monomial(ring, d, vec![0; d], 0, c)
    }

    pub fn one(ring: Ring, d: usize) -> Self {
        Self::constant(ring, d, Scalar::one())
    }

    pub fn monomial(ring: Ring, d: usize, exps: Vec<i32>, mask: ExtMask, c: Scalar) -> Self {
        assert_eq!(exps.len(), d);
        let mut p = Self::zero(ring, d);
        if !c.is_zero() {
            p.terms.insert((exps, mask), c);
        }
        p
    }

    /// X_r (or Y_r), 1-based.
    pub fn var(ring: Ring, d: usize, r: usize) -> Self {
        let mut e = vec![0; d];
        e[r - 1] = 1;
        Self::monomial(ring, d, e, 0, Scalar::one())
    }

    /// X_r^k for any integer k.
    pub fn var_pow(ring: Ring, d: usize, r: usize, k: i32) -> Self {
        let mut e = vec![0; d];
        e[r - 1] = k;
        Self::monomial(ring, d, e, 0, Scalar::one())
    }

    /// θ_r (or Ω_r), 1-based.
    pub fn ext(ring: Ring, d: usize, r: usize) -> Self {
        Self::monomial(ring, d, vec![0; d], 1 << (r - 1), Scalar::one())
    }

    pub fn same_shape(&self) -> Self {
        Self::zero(self.ring.clone(), self.d)
    }

    pub fn scalar(&self, c: Scalar) -> Self {
        Self::constant(self.ring.clone(), self.d, c)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, exps: Vec<i32>, mask: ExtMask, c: Scalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry((exps, mask)) {
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

    fn check_ring(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring || self.d != other.d {
            return Err(Error::RingMismatch(format!("{:?} vs {:?}", self.ring, other.ring)));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for ((e, m), c) in &other.terms {
            out.add_term(e.clone(), *m, c.clone());
        }
        Ok(out)
    }

    pub fn add_assign_scaled(&mut self, other: &Self, c: &Scalar) {
        debug_assert_eq!(self.d, other.d);
        if c.is_zero() {
            return;
        }
        for ((e, m), x) in &other.terms {
            self.add_term(e.clone(), *m, x * c);
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return self.same_shape();
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v *= c;
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&sc(-1))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        Ok(self.mul_unchecked(other))
    }

    /// Product keeping only monomials of total degree < `order` (when given).
    pub fn mul_truncated(&self, other: &Self, order: Option<i64>) -> Self {
        let mut out = self.same_shape();
        for ((e1, m1), c1) in &self.terms {
            let d1: i64 = e1.iter().map(|&x| x as i64).sum();
            for ((e2, m2), c2) in &other.terms {
                if let Some(o) = order {
                    let d2: i64 = e2.iter().map(|&x| x as i64).sum();
                    if d1 + d2 >= o {
                        continue;
                    }
                }
                let Some(sign) = ext_mul_sign(*m1, *m2) else { continue };
                let e: Vec<i32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                let mut c = c1 * c2;
                if sign < 0 {
                    c = -c;
                }
                out.add_term(e, m1 | m2, c);
            }
        }
        out
    }

    pub fn mul_unchecked(&self, other: &Self) -> Self {
        self.mul_truncated(other, None)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = self.scalar(Scalar::one());
        for _ in 0..k {
            out = out.mul_unchecked(self);
        }
        out
    }

    pub fn retag(&self, ring: Ring) -> Self {
        SuperPoly { ring, d: self.d, terms: self.terms.clone() }
    }

    pub fn max_ext_degree(&self) -> u32 {
        self.terms.keys().map(|(_, m)| m.count_ones()).max().unwrap_or(0)
    }

    pub fn is_exterior_free(&self) -> bool {
        self.terms.keys().all(|(_, m)| *m == 0)
    }

    pub fn has_negative_exponents(&self) -> bool {
        self.terms.keys().any(|(e, _)| e.iter().any(|&x| x < 0))
    }

    /// Largest total degree of a stored monomial (None for zero).
    pub fn max_total_degree(&self) -> Option<i64> {
        self.terms.keys().map(|(e, _)| e.iter().map(|&x| x as i64).sum()).max()
    }

    pub fn min_total_degree(&self) -> Option<i64> {
        self.terms.keys().map(|(e, _)| e.iter().map(|&x| x as i64).sum()).min()
    }

    pub fn coeff(&self, exps: &[i32], mask: ExtMask) -> Scalar {
        self.terms.get(&(exps.to_vec(), mask)).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn constant_term(&self) -> Scalar {
        self.coeff(&vec![0; self.d], 0)
    }

    /// Part with exterior monomial exactly `mask`, as an exterior-free element.
    pub fn ext_component(&self, mask: ExtMask) -> Self {
        let mut out = self.same_shape();
        for ((e, m), c) in &self.terms {
            if *m == mask {
                out.terms.insert((e.clone(), 0), c.clone());
            }
        }
        out
    }

    pub fn keep_below_degree(&self, order: i64) -> Self {
        let mut out = self.same_shape();
        for ((e, m), c) in &self.terms {
            if e.iter().map(|&x| x as i64).sum::<i64>() < order {
                out.terms.insert((e.clone(), *m), c.clone());
            }
        }
        out
    }

    /// Left multiplication by θ_1 (Ω_1).
    pub fn mul_ext_left(&self, r: usize) -> Self {
        let bit = 1u32 << (r - 1);
        let mut out = self.same_shape();
        for ((e, m), c) in &self.terms {
            if let Some(s) = ext_mul_sign(bit, *m) {
                out.add_term(e.clone(), m | bit, if s < 0 { -c.clone() } else { c.clone() });
            }
        }
        out
    }

    /// Multiplication by X_r^k.
    pub fn mul_var(&self, r: usize, k: i32) -> Self {
        let mut out = self.same_shape();
        for ((e, m), c) in &self.terms {
            let mut e = e.clone();
            e[r - 1] += k;
            out.terms.insert((e, *m), c.clone());
        }
        out
    }

    /// The simple reflection s_r. With `twist = Some(c)` the exterior
    /// generators transform as θ_r ↦ θ_r + c·θ_{r+1}; with `None` θ_r and
    /// θ_{r+1} are exchanged.
    pub fn reflect(&self, r: usize, twist: Option<&SuperPoly>, ring: Ring) -> Self {
        let (i, j) = (r - 1, r);
        let bi = 1u32 << i;
        let bj = 1u32 << j;
        let mut out = SuperPoly::zero(ring, self.d);
        for ((e, m), c) in &self.terms {
            let mut se = e.clone();
            se.swap(i, j);
            match twist {
                Some(tw) => {
                    out.add_term(se.clone(), *m, c.clone());
                    if m & bi != 0 && m & bj == 0 {
                        let nm = (m & !bi) | bj;
                        for ((te, tm), tc) in &tw.terms {
                            debug_assert_eq!(*tm, 0);
                            let ee: Vec<i32> = se.iter().zip(te).map(|(a, b)| a + b).collect();
                            out.add_term(ee, nm, c * tc);
                        }
                    }
                }
                None => {
                    let has_i = m & bi != 0;
                    let has_j = m & bj != 0;
                    let mut nm = m & !(bi | bj);
                    if has_i {
                        nm |= bj;
                    }
                    if has_j {
                        nm |= bi;
                    }
                    let cc = if has_i && has_j { -c.clone() } else { c.clone() };
                    out.add_term(se, nm, cc);
                }
            }
        }
        out
    }

    /// (f − s_r f)/(X_r − X_{r+1}) for the twisted action with twist X_r − X_{r+1},
    /// computed monomial-wise.
    pub fn divided_difference(&self, r: usize) -> Self {
        let (i, j) = (r - 1, r);
        let bi = 1u32 << i;
        let bj = 1u32 << j;
        let mut out = self.same_shape();
        for ((e, m), c) in &self.terms {
            let (a, b) = (e[i], e[j]);
            if a != b {
                let (lo, hi, sign) = if a > b { (b, a, 1) } else { (a, b, -1) };
                let cc = if sign > 0 { c.clone() } else { -c.clone() };
                for k in 0..(hi - lo) {
                    let mut ee = e.clone();
                    ee[i] = lo + k;
                    ee[j] = lo + (hi - lo - 1 - k);
                    out.add_term(ee, *m, cc.clone());
                }
            }
            if m & bi != 0 && m & bj == 0 {
                let mut se = e.clone();
                se.swap(i, j);
                out.add_term(se, (m & !bi) | bj, -c.clone());
            }
        }
        out
    }

    /// X_r − X_{r+1} (or Y_r − Y_{r+1}) in this ring.
    pub fn root(&self, r: usize) -> Self {
        let mut p = SuperPoly::var(self.ring.clone(), self.d, r);
        p.add_assign_scaled(&SuperPoly::var(self.ring.clone(), self.d, r + 1), &sc(-1));
        p
    }

    pub fn hecke_simple(&self, r: usize) -> Self {
        let tw = self.root(r);
        self.reflect(r, Some(&tw), self.ring.clone())
    }

    pub fn render(&self, var: &str, ext: &str) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for ((e, m), c) in &self.terms {
            let mut factors = Vec::new();
            for (k, &x) in e.iter().enumerate() {
                match x {
                    0 => {}
                    1 => factors.push(format!("{var}{}", k + 1)),
                    _ => factors.push(format!("{var}{}^{}", k + 1, x)),
                }
            }
            if *m != 0 {
                factors.push(mask_indices(*m).iter().map(|r| format!("{ext}{r}")).collect::<String>());
            }
            let mono = factors.join("·");
            let s = if mono.is_empty() {
                show(c)
            } else if c.is_one() {
                mono
            } else if *c == sc(-1) {
                format!("-{mono}")
            } else {
                format!("{}·{mono}", show(c))
            };
            parts.push(s);
        }
        parts.join(" + ")
    }
}

impl fmt::Display for SuperPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.ring {
            Ring::Klr(l) => write!(f, "({})·1_{}", self.render("Y", "Ω"), show_seq(l)),
            _ => write!(f, "{}", self.render("X", "θ")),
        }
    }
}

/// w(f) for the Hecke-side action, along the canonical reduced word.
pub fn sym_act_hecke(w: &Perm, f: &SuperPoly) -> Result<SuperPoly> {
    if f.ring.is_klr() {
        return Err(Error::RingMismatch("sym_act_hecke needs a Hecke ring".into()));
    }
    let mut g = f.clone();
    for &r in w.reduced_word().iter().rev() {
        g = g.hecke_simple(r);
    }
    Ok(g)
}

/// s_k on PR_ν: moves f·1_i to the component s_k·i.
pub fn klr_simple(k: usize, f: &SuperPoly) -> SuperPoly {
    let label = f.ring.label().expect("KLR ring").to_vec();
    let new_label = Perm::simple(f.d, k).act_seq(&label);
    let ring = Ring::Klr(new_label);
    if label[k - 1] == label[k] {
        let tw = f.root(k).retag(ring.clone());
        f.reflect(k, Some(&tw), ring)
    } else {
        f.reflect(k, None, ring)
    }
}

pub fn sym_act_klr(w: &Perm, f: &SuperPoly) -> Result<SuperPoly> {
    if !f.ring.is_klr() {
        return Err(Error::RingMismatch("sym_act_klr needs a KLR ring".into()));
    }
    let mut g = f.clone();
    for &r in w.reduced_word().iter().rev() {
        g = klr_simple(r, &g);
    }
    Ok(g)
}

pub fn demazure_hecke(r: usize, f: &SuperPoly) -> Result<SuperPoly> {
    if f.ring.is_klr() {
        return Err(Error::RingMismatch("demazure_hecke needs a Hecke ring".into()));
    }
    if r == 0 || r >= f.d {
        return Err(Error::IndexOutOfRange(format!("∂_{r} with d = {}", f.d)));
    }
    Ok(f.divided_difference(r))
}

pub fn demazure_klr(r: usize, f: &SuperPoly) -> Result<SuperPoly> {
    let label = f.ring.label().ok_or_else(|| Error::RingMismatch("demazure_klr needs a KLR ring".into()))?;
    if r == 0 || r >= f.d {
        return Err(Error::IndexOutOfRange(format!("∂_{r} with d = {}", f.d)));
    }
    if label[r - 1] != label[r] {
        return Err(Error::LabelMismatch(format!("labels at {r},{} differ", r + 1)));
    }
    Ok(f.divided_difference(r))
}

/// Nonnegative exponent vectors of length d and total degree ≤ deg.
pub fn exponents_up_to(d: usize, deg: usize) -> Vec<Vec<i32>> {
    let mut out = Vec::new();
    let mut cur = vec![0i32; d];
    fn rec(pos: usize, left: usize, cur: &mut Vec<i32>, out: &mut Vec<Vec<i32>>) {
        if pos == cur.len() {
            out.push(cur.clone());
            return;
        }
        for k in 0..=left {
            cur[pos] = k as i32;
            rec(pos + 1, left - k, cur, out);
        }
        cur[pos] = 0;
    }
    rec(0, deg, &mut cur, &mut out);
    out.sort_by_key(|e| (e.iter().sum::<i32>(), std::cmp::Reverse(e.clone())));
    out
}

/// Exponent vectors of total degree exactly `deg`.
pub fn exponents_of_degree(d: usize, deg: usize) -> Vec<Vec<i32>> {
    exponents_up_to(d, deg).into_iter().filter(|e| e.iter().sum::<i32>() == deg as i32).collect()
}

/// Probe monomials X^e θ^S with |e| ≤ deg and every S.
pub fn probe_monomials(ring: &Ring, d: usize, deg: usize) -> Vec<SuperPoly> {
    let mut out = Vec::new();
    for e in exponents_up_to(d, deg) {
        for m in 0..(1u32 << d) {
            out.push(SuperPoly::monomial(ring.clone(), d, e.clone(), m, Scalar::one()));
        }
    }
    out
}

/// Random element with small integer coefficients.
pub fn random_poly<R: Rng>(rng: &mut R, ring: &Ring, d: usize, max_deg: usize, terms: usize, with_ext: bool) -> SuperPoly {
    let mut p = SuperPoly::zero(ring.clone(), d);
    let exps = exponents_up_to(d, max_deg);
    for _ in 0..terms {
        let e = exps[rng.gen_range(0..exps.len())].clone();
        let m = if with_ext { rng.gen_range(0..(1u32 << d)) } else { 0 };
        let c = sc(rng.gen_range(-3..=3));
        p.add_term(e, m, c);
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hp(d: usize) -> Ring {
        let _ = d;
        Ring::HeckeP
    }

    #[test]
    fn exterior_signs() {
        let t1 = SuperPoly::ext(hp(3), 3, 1);
        let t2 = SuperPoly::ext(hp(3), 3, 2);
        let t12 = t1.try_mul(&t2).unwrap();
        assert_eq!(t12, SuperPoly::monomial(hp(3), 3, vec![0, 0, 0], 0b11, sc(1)));
        assert_eq!(t2.try_mul(&t1).unwrap(), t12.neg());
        assert!(t1.try_mul(&t1).unwrap().is_zero());
        let x1 = SuperPoly::var(hp(2), 2, 1);
        let x2 = SuperPoly::var(hp(2), 2, 2);
        let lhs = x1.try_add(&x2).unwrap().try_mul(&x1.try_add(&x2.neg()).unwrap()).unwrap();
        let rhs = x1.pow(2).try_add(&x2.pow(2).neg()).unwrap();
        assert_eq!(lhs, rhs);
        assert!(matches!(x1.try_mul(&x1.retag(Ring::HeckePl)), Err(Error::RingMismatch(_))));
    }

    #[test]
    fn simple_reflection_examples() {
        let t1 = SuperPoly::ext(hp(2), 2, 1);
        let s = t1.hecke_simple(1);
        let expect = t1.try_add(&t1.root(1).try_mul(&SuperPoly::ext(hp(2), 2, 2)).unwrap()).unwrap();
        assert_eq!(s, expect);
        let t2 = SuperPoly::ext(hp(2), 2, 2);
        assert_eq!(t2.hecke_simple(1), t2);
        let x12 = SuperPoly::monomial(hp(2), 2, vec![1, 1], 0, sc(1));
        assert_eq!(x12.hecke_simple(1), x12);
    }

    #[test]
    fn demazure_examples() {
        let x1 = SuperPoly::var(hp(2), 2, 1);
        assert_eq!(demazure_hecke(1, &x1).unwrap(), x1.scalar(sc(1)));
        assert!(demazure_hecke(1, &x1.scalar(sc(1))).unwrap().is_zero());
        let t1 = SuperPoly::ext(hp(2), 2, 1);
        assert_eq!(demazure_hecke(1, &t1).unwrap(), SuperPoly::ext(hp(2), 2, 2).neg());
        assert!(demazure_hecke(2, &x1).is_err());
    }

    #[test]
    fn klr_reflection_examples() {
        let i = sc(0);
        let j = sc(1);
        let ring = Ring::Klr(vec![i.clone(), i.clone()]);
        let o1 = SuperPoly::ext(ring.clone(), 2, 1);
        let o2 = SuperPoly::ext(ring.clone(), 2, 2);
        let expect = o1.try_add(&o1.root(1).try_mul(&o2).unwrap()).unwrap();
        assert_eq!(klr_simple(1, &o1), expect);
        let ring2 = Ring::Klr(vec![i.clone(), j.clone()]);
        let s = klr_simple(1, &SuperPoly::ext(ring2, 2, 1));
        assert_eq!(s, SuperPoly::ext(Ring::Klr(vec![j.clone(), i.clone()]), 2, 2));
        let y1 = SuperPoly::var(Ring::Klr(vec![i.clone(), j.clone()]), 2, 1);
        assert_eq!(klr_simple(1, &y1), SuperPoly::var(Ring::Klr(vec![j.clone(), i]), 2, 2));
        let yr = SuperPoly::var(ring.clone(), 2, 1);
        assert_eq!(demazure_klr(1, &yr).unwrap(), yr.scalar(sc(1)));
        assert_eq!(demazure_klr(1, &SuperPoly::var(ring.clone(), 2, 2)).unwrap(), yr.scalar(sc(-1)));
        assert!(demazure_klr(1, &SuperPoly::one(ring, 2)).unwrap().is_zero());
        assert!(matches!(demazure_klr(1, &y1), Err(Error::LabelMismatch(_))));
    }

    #[test]
    fn render_format() {
        let p = SuperPoly::monomial(hp(3), 3, vec![2, 1, 0], 0b101, sc(3));
        assert_eq!(p.render("X", "θ"), "3·X1^2·X2·θ1θ3");
    }

    #[test]
    fn laurent_divided_difference() {
        let ring = Ring::HeckePl;
        let f = SuperPoly::var_pow(ring.clone(), 2, 1, -2);
        let g = f.divided_difference(1);
        let back = g.try_mul(&f.root(1)).unwrap();
        let diff = f.try_add(&f.hecke_simple(1).neg()).unwrap();
        assert_eq!(back, diff);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;
        use rand::SeedableRng;

        fn pair(seed: u64, d: usize) -> (SuperPoly, SuperPoly, SuperPoly) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let f = random_poly(&mut rng, &Ring::HeckeP, d, 3, 4, true);
            let g = random_poly(&mut rng, &Ring::HeckeP, d, 3, 4, true);
            let h = random_poly(&mut rng, &Ring::HeckeP, d, 2, 3, true);
            (f, g, h)
        }

        proptest! {
            #[test]
            fn multiplication_is_associative(seed in 0u64..10_000) {
                let (f, g, h) = pair(seed, 3);
                let l = f.try_mul(&g).unwrap().try_mul(&h).unwrap();
                let r = f.try_mul(&g.try_mul(&h).unwrap()).unwrap();
                prop_assert_eq!(l, r);
            }

            #[test]
            fn twisted_reflection_is_an_involutive_automorphism(seed in 0u64..10_000, r in 1usize..3) {
                let (f, g, _) = pair(seed, 3);
                prop_assert_eq!(f.hecke_simple(r).hecke_simple(r), f.clone());
                let fg = f.try_mul(&g).unwrap();
                prop_assert_eq!(fg.hecke_simple(r), f.hecke_simple(r).try_mul(&g.hecke_simple(r)).unwrap());
            }

            #[test]
            fn twisted_reflections_braid(seed in 0u64..10_000) {
                let (f, _, _) = pair(seed, 3);
                let l = f.hecke_simple(1).hecke_simple(2).hecke_simple(1);
                let r = f.hecke_simple(2).hecke_simple(1).hecke_simple(2);
                prop_assert_eq!(l, r);
            }

            #[test]
            fn divided_difference_twisted_leibniz(seed in 0u64..10_000, r in 1usize..3) {
                let (f, g, _) = pair(seed, 3);
                let lhs = f.try_mul(&g).unwrap().divided_difference(r);
                let rhs = f
                    .divided_difference(r)
                    .try_mul(&g)
                    .unwrap()
                    .try_add(&f.hecke_simple(r).try_mul(&g.divided_difference(r)).unwrap())
                    .unwrap();
                prop_assert_eq!(lhs, rhs);
            }

            #[test]
            fn divided_difference_times_root(seed in 0u64..10_000, r in 1usize..3) {
                let (f, _, _) = pair(seed, 3);
                let back = f.divided_difference(r).try_mul(&f.root(r)).unwrap();
                prop_assert_eq!(back, f.try_add(&f.hecke_simple(r).neg()).unwrap());
            }
        }
    }
}
