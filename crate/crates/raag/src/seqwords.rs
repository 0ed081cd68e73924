//! Periodicity and quasi-root matching for plain letter sequences over an
//! abstract alphabet with formal inverses. Everything here is independent
//! of any defining graph; the free-group reduction is deliberately
//! separate from [`crate::words`] so the two can serve as independent
//! oracles.

use num::integer::gcd;
use num::rational::Ratio;

use crate::error::{Error, Result};

/// A symbol or its formal inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SymbolLetter {
    pub sym: u32,
    pub inv: bool,
}

impl SymbolLetter {
    pub fn new(sym: u32, inv: bool) -> Self {
        SymbolLetter { sym, inv }
    }

    pub fn inverse(self) -> Self {
        SymbolLetter {
            sym: self.sym,
            inv: !self.inv,
        }
    }
}

/// A finite sequence over `X^{±1}`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SymbolWord {
    letters: Vec<SymbolLetter>,
}

impl SymbolWord {
    pub fn new(letters: Vec<SymbolLetter>) -> Self {
        SymbolWord { letters }
    }

    /// ASCII helper: lowercase `a..z` are positive symbols `0..25`,
    /// uppercase letters their inverses.
    pub fn from_ascii(s: &str) -> Self {
        let letters = s
            .chars()
            .map(|c| {
                if c.is_ascii_uppercase() {
                    SymbolLetter::new(c as u32 - 'A' as u32, true)
                } else {
                    SymbolLetter::new(c as u32 - 'a' as u32, false)
                }
            })
            .collect();
        SymbolWord { letters }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[SymbolLetter] {
        &self.letters
    }

    pub fn concat(&self, other: &SymbolWord) -> SymbolWord {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        SymbolWord { letters }
    }

    pub fn repeat(&self, n: usize) -> SymbolWord {
        let mut letters = Vec::with_capacity(self.len() * n);
        for _ in 0..n {
            letters.extend_from_slice(&self.letters);
        }
        SymbolWord { letters }
    }

    pub fn inverse(&self) -> SymbolWord {
        SymbolWord {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    pub fn is_prefix_of(&self, other: &SymbolWord) -> bool {
        other.letters.len() >= self.letters.len()
            && other.letters[..self.letters.len()] == self.letters[..]
    }
}

/// `rotate(w, r)`: the cyclic conjugate `w[r..] w[..r]`.
pub fn rotate(w: &SymbolWord, r: usize) -> SymbolWord {
    let n = w.len();
    if n == 0 {
        return w.clone();
    }
    let r = r % n;
    let mut letters = w.letters[r..].to_vec();
    letters.extend_from_slice(&w.letters[..r]);
    SymbolWord { letters }
}

/// Free-group reduction over `X^{±1}`: cancel adjacent `x x^{-1}` pairs
/// only (no commutation).
pub fn free_reduce(w: &SymbolWord) -> SymbolWord {
    let mut stack: Vec<SymbolLetter> = Vec::with_capacity(w.len());
    for &l in w.letters() {
        match stack.last() {
            Some(&top) if top.sym == l.sym && top.inv != l.inv => {
                stack.pop();
            }
            _ => stack.push(l),
        }
    }
    SymbolWord { letters: stack }
}

/// Equality in the free group on `X`.
pub fn free_equal(w1: &SymbolWord, w2: &SymbolWord) -> bool {
    free_reduce(&w1.concat(&w2.inverse())).is_empty()
}

/// Two periods sharing a window of length `p + q` force the period
/// `gcd(p, q)`.
///
/// `prefix` is the common prefix of the two periodic sequences; it must be
/// consistent with both periods throughout, and at least `p + q` long.
/// Returns `gcd(p, q)` after checking that the window indeed has that
/// period.
pub fn merge_periods(p: usize, q: usize, prefix: &SymbolWord) -> Result<usize> {
    if p == 0 || q == 0 {
        return Err(Error::Precondition("periods must be >= 1".into()));
    }
    if prefix.len() < p + q {
        return Err(Error::Precondition(format!(
            "window of length {} is shorter than p + q = {}",
            prefix.len(),
            p + q
        )));
    }
    let letters = prefix.letters();
    for (period, name) in [(p, "p"), (q, "q")] {
        for i in 0..letters.len().saturating_sub(period) {
            if letters[i] != letters[i + period] {
                return Err(Error::InconsistentPeriods(format!(
                    "window violates period {name} = {period} at position {i}"
                )));
            }
        }
    }
    let d = gcd(p, q);
    for i in 0..letters.len() - d {
        if letters[i] != letters[i + d] {
            // Cannot happen when the two period checks pass: the window is
            // long enough for the periodicity argument to go through.
            return Err(Error::ConclusionFailed(format!(
                "window fails the merged period {d} at position {i}"
            )));
        }
    }
    Ok(d)
}

/// Whether a nonempty word is not a proper power of a shorter word.
pub fn seq_is_primitive(w: &SymbolWord) -> Result<bool> {
    let n = w.len();
    if n == 0 {
        return Err(Error::Precondition("primitivity of the empty word".into()));
    }
    for d in 1..n {
        if n % d == 0 && SymbolWord::new(w.letters[..d].to_vec()).repeat(n / d) == *w {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Common-root argument: if `w1²` is a prefix of a power of `w2` and
/// vice versa, two primitive words must coincide. Returns the (always
/// true under the preconditions) comparison `w1 ≡ w2`.
pub fn common_root_check(w1: &SymbolWord, w2: &SymbolWord) -> Result<bool> {
    for (w, name) in [(w1, "w1"), (w2, "w2")] {
        if !seq_is_primitive(w)? {
            return Err(Error::Precondition(format!("{name} is not primitive")));
        }
    }
    let (p, q) = (w1.len(), w2.len());
    let double_in = |a: &SymbolWord, b: &SymbolWord| {
        let needed = 2 * a.len();
        let reps = needed.div_ceil(b.len()) + 1;
        a.repeat(2).is_prefix_of(&b.repeat(reps))
    };
    if !double_in(w1, w2) {
        return Err(Error::Precondition(
            "w1^2 is not a prefix of a power of w2".into(),
        ));
    }
    if !double_in(w2, w1) {
        return Err(Error::Precondition(
            "w2^2 is not a prefix of a power of w1".into(),
        ));
    }
    debug_assert_eq!(p, q);
    Ok(w1 == w2)
}

/// One decomposition `w ≡ a wᵢ^{mᵢ} bᵢ` of a symbol word.
#[derive(Debug, Clone)]
pub struct WordDecomposition {
    pub a: SymbolWord,
    pub root: SymbolWord,
    pub power: usize,
    pub b: SymbolWord,
}

impl WordDecomposition {
    pub fn assemble(&self) -> SymbolWord {
        self.a.concat(&self.root.repeat(self.power)).concat(&self.b)
    }
}

/// Matches two quasi-root decompositions of the same sequence: verifies
/// the hypotheses, finds the rotation `r` with `w1 ≡ rotate(w2, r)`, and
/// checks the free-group conjugator identities
/// `a1 w1 a1^{-1} = a2 w2 a2^{-1}` and `b1^{-1} w1 b1 = b2^{-1} w2 b2`.
///
/// A failed hypothesis is a [`Error::Precondition`]; a verified hypothesis
/// set with no valid rotation or failing identities is
/// [`Error::ConclusionFailed`], which would falsify the underlying result.
pub fn match_word_quasiroots(
    w: &SymbolWord,
    d1: &WordDecomposition,
    d2: &WordDecomposition,
    bound_a: Ratio<i64>,
    bound_b: Ratio<i64>,
) -> Result<(usize, bool)> {
    for (d, name) in [(d1, "first"), (d2, "second")] {
        if d.assemble() != *w {
            return Err(Error::Precondition(format!(
                "{name} decomposition does not spell out w"
            )));
        }
        if d.power < 2 {
            return Err(Error::Precondition(format!(
                "{name} decomposition has power {} < 2",
                d.power
            )));
        }
        if !seq_is_primitive(&d.root)? {
            return Err(Error::Precondition(format!(
                "{name} root is not primitive"
            )));
        }
        if Ratio::from_integer(d.a.len() as i64) > bound_a {
            return Err(Error::Precondition(format!("{name} |a| exceeds A")));
        }
        if Ratio::from_integer(d.b.len() as i64) > bound_b {
            return Err(Error::Precondition(format!("{name} |b| exceeds B")));
        }
        let slack = Ratio::from_integer(w.len() as i64) - bound_a.clone() - bound_b.clone();
        if slack < Ratio::from_integer(2 * d.root.len() as i64) {
            return Err(Error::Precondition(format!(
                "window bound |w| - (A+B) >= 2|{name} root| fails"
            )));
        }
    }

    let rotation = (0..d2.root.len().max(1))
        .find(|&r| rotate(&d2.root, r) == d1.root)
        .ok_or_else(|| {
            Error::ConclusionFailed("roots are not cyclic rotations of each other".into())
        })?;

    let conj = |a: &SymbolWord, root: &SymbolWord| a.concat(root).concat(&a.inverse());
    let left_ok = free_equal(&conj(&d1.a, &d1.root), &conj(&d2.a, &d2.root));
    let conj_r = |b: &SymbolWord, root: &SymbolWord| b.inverse().concat(root).concat(b);
    let right_ok = free_equal(&conj_r(&d1.b, &d1.root), &conj_r(&d2.b, &d2.root));
    if !(left_ok && right_ok) {
        return Err(Error::ConclusionFailed(
            "free-group conjugator identities fail".into(),
        ));
    }
    Ok((rotation, true))
}
