//! Permutations of {1..d} acting on positions from the left.
//!
//! Stored as a 0-based image array: `img[p] = w(p+1) - 1`. Products compose
//! as maps, `(uv)(i) = u(v(i))`. A word `(r_1,..,r_k)` denotes
//! `s_{r_1} s_{r_2} ... s_{r_k}`, so `s_{r_k}` is applied first. A label
//! sequence moves with its positions: `(w·i)_{w(p)} = i_p`.

use std::collections::HashMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    img: Vec<u8>,
}

impl Perm {
    pub fn identity(d: usize) -> Self {
        Perm { img: (0..d as u8).collect() }
    }

    /// Simple transposition s_r, 1 ≤ r < d.
    pub fn simple(d: usize, r: usize) -> Self {
        assert!(r >= 1 && r < d, "s_{r} out of range for d = {d}");
        let mut p = Self::identity(d);
        p.img.swap(r - 1, r);
        p
    }

    /// From a 1-based image array.
    pub fn from_images(images: &[usize]) -> Option<Self> {
        let d = images.len();
        let mut seen = vec![false; d];
        for &x in images {
            if x == 0 || x > d || seen[x - 1] {
                return None;
            }
            seen[x - 1] = true;
        }
        Some(Perm { img: images.iter().map(|&x| (x - 1) as u8).collect() })
    }

    pub fn images(&self) -> Vec<usize> {
        self.img.iter().map(|&x| x as usize + 1).collect()
    }

    /// Product of simple reflections, `word[0]` leftmost.
    pub fn from_word(d: usize, word: &[usize]) -> Self {
        word.iter().fold(Self::identity(d), |acc, &r| acc.compose(&Self::simple(d, r)))
    }

    pub fn d(&self) -> usize {
        self.img.len()
    }

    /// w(i) for 1-based i.
    pub fn apply(&self, i: usize) -> usize {
        self.img[i - 1] as usize + 1
    }

    pub fn compose(&self, other: &Perm) -> Perm {
        Perm { img: other.img.iter().map(|&x| self.img[x as usize]).collect() }
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u8; self.img.len()];
        for (p, &x) in self.img.iter().enumerate() {
            inv[x as usize] = p as u8;
        }
        Perm { img: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.img.iter().enumerate().all(|(p, &x)| p == x as usize)
    }

    pub fn length(&self) -> usize {
        let n = self.img.len();
        let mut c = 0;
        for i in 0..n {
            for j in i + 1..n {
                if self.img[i] > self.img[j] {
                    c += 1;
                }
            }
        }
        c
    }

    /// s_r·w (left multiplication): swaps the values r and r+1.
    pub fn left_mul_simple(&self, r: usize) -> Perm {
        let mut img = self.img.clone();
        for x in img.iter_mut() {
            if *x as usize == r - 1 {
                *x = r as u8;
            } else if *x as usize == r {
                *x = (r - 1) as u8;
            }
        }
        Perm { img }
    }

    /// w·s_r (right multiplication): swaps positions r and r+1.
    pub fn right_mul_simple(&self, r: usize) -> Perm {
        let mut img = self.img.clone();
        img.swap(r - 1, r);
        img.into()
    }

    /// l(s_r w) < l(w).
    pub fn has_left_descent(&self, r: usize) -> bool {
        let inv = self.inverse();
        inv.img[r - 1] > inv.img[r]
    }

    /// l(w s_r) < l(w).
    pub fn has_right_descent(&self, r: usize) -> bool {
        self.img[r - 1] > self.img[r]
    }

    /// Lexicographically smallest reduced word.
    pub fn reduced_word(&self) -> Vec<usize> {
        let mut word = Vec::with_capacity(self.length());
        let mut w = self.clone();
        while !w.is_identity() {
            let r = (1..w.d()).find(|&r| w.has_left_descent(r)).expect("non-identity has a descent");
            word.push(r);
            w = w.left_mul_simple(r);
        }
        word
    }

    /// Reduced word minimizing the index sum, ties broken lexicographically.
    pub fn left_adjusted_word(&self) -> Vec<usize> {
        let mut memo: HashMap<Perm, (usize, Vec<usize>)> = HashMap::new();
        left_adjusted_rec(self, &mut memo).1
    }

    /// The sequence `w·i`.
    pub fn act_seq<T: Clone>(&self, seq: &[T]) -> Vec<T> {
        let mut out = seq.to_vec();
        for (p, x) in seq.iter().enumerate() {
            out[self.img[p] as usize] = x.clone();
        }
        out
    }

    /// All permutations of {1..d} in lexicographic order of image arrays.
    pub fn all(d: usize) -> Vec<Perm> {
        let mut out = Vec::new();
        let mut cur: Vec<u8> = (0..d as u8).collect();
        loop {
            out.push(Perm { img: cur.clone() });
            if !next_permutation(&mut cur) {
                break;
            }
        }
        out
    }
}

impl From<Vec<u8>> for Perm {
    fn from(img: Vec<u8>) -> Self {
        Perm { img }
    }
}

fn left_adjusted_rec(w: &Perm, memo: &mut HashMap<Perm, (usize, Vec<usize>)>) -> (usize, Vec<usize>) {
    if w.is_identity() {
        return (0, Vec::new());
    }
    if let Some(v) = memo.get(w) {
        return v.clone();
    }
    let mut best: Option<(usize, Vec<usize>)> = None;
    for r in 1..w.d() {
        if !w.has_left_descent(r) {
            continue;
        }
        let (s, rest) = left_adjusted_rec(&w.left_mul_simple(r), memo);
        let mut cand = vec![r];
        cand.extend(rest);
        let total = s + r;
        let better = match &best {
            None => true,
            Some((bs, bw)) => total < *bs || (total == *bs && cand < *bw),
        };
        if better {
            best = Some((total, cand));
        }
    }
    let best = best.expect("descent exists");
    memo.insert(w.clone(), best.clone());
    best
}

pub fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.images().iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_reduced_words(w: &Perm) -> Vec<Vec<usize>> {
        if w.is_identity() {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for r in 1..w.d() {
            if w.has_left_descent(r) {
                for mut rest in all_reduced_words(&w.left_mul_simple(r)) {
                    rest.insert(0, r);
                    out.push(rest);
                }
            }
        }
        out
    }

    #[test]
    fn conventions() {
        let w = Perm::from_word(3, &[2, 1]);
        assert_eq!(w.images(), vec![3, 1, 2]);
        assert_eq!(w.left_adjusted_word(), vec![2, 1]);
        let w0 = Perm::from_images(&[3, 2, 1]).unwrap();
        assert_eq!(w0.left_adjusted_word(), vec![1, 2, 1]);
        assert_eq!(Perm::simple(2, 1).left_adjusted_word(), vec![1]);
        assert_eq!(Perm::simple(3, 1).act_seq(&['a', 'b', 'c']), vec!['b', 'a', 'c']);
    }

    #[test]
    fn words_are_reduced_and_evaluate_back() {
        for d in 1..=5 {
            for w in Perm::all(d) {
                let rw = w.reduced_word();
                assert_eq!(rw.len(), w.length());
                assert_eq!(Perm::from_word(d, &rw), w);
                let la = w.left_adjusted_word();
                assert_eq!(Perm::from_word(d, &la), w);
                if d <= 4 {
                    let all = all_reduced_words(&w);
                    assert_eq!(rw, *all.iter().min().unwrap());
                    let best = all
                        .iter()
                        .min_by_key(|x| (x.iter().sum::<usize>(), (*x).clone()))
                        .unwrap();
                    assert_eq!(&la, best);
                }
            }
        }
    }

    #[test]
    fn descents_and_products() {
        for w in Perm::all(4) {
            for r in 1..4 {
                let s = Perm::simple(4, r);
                assert_eq!(w.left_mul_simple(r), s.compose(&w));
                assert_eq!(w.right_mul_simple(r), w.compose(&s));
                assert_eq!(w.has_left_descent(r), s.compose(&w).length() < w.length());
                assert_eq!(w.has_right_descent(r), w.compose(&s).length() < w.length());
            }
            assert!(w.compose(&w.inverse()).is_identity());
        }
        assert_eq!(Perm::all(4).len(), 24);
    }
}
