//! (λ,N)-quasi-root decompositions: verification, exhaustive search at
//! desk scale, and the uniqueness harness.
//!
//! A (λ,N)-quasi-root of `h` is an element `g` with a geodesic
//! decomposition `h = a gⁿ b`, `n ≥ N`, `|a|, |b| ≤ λ|h|`. All λ-bound
//! comparisons use exact rational arithmetic: the interesting constants
//! sit exactly on rational boundaries.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use num::rational::Ratio;
use num::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{DefiningGraph, VertexOrder};
use crate::normalform::{choose_order_for_pair, conical_conjugate, is_sd_conical, normal_form};
use crate::seqwords::{match_word_quasiroots, SymbolLetter, SymbolWord, WordDecomposition};
use crate::structure::{
    are_conjugate_cyclically_reduced, cyclically_reduce, extract_nth_roots, is_cyclically_reduced,
    is_primitive, is_strongly_non_split,
};
use crate::words::{enumerate_geodesic_prefixes_up_to, GroupElement, Letter, Word};

/// An exact rational, used for λ and the A/B length bounds.
pub type Rational = Ratio<i64>;

/// Parses `p/q` or a bare integer into a rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Precondition(format!("malformed rational `{s}`"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.trim().parse().map_err(|_| bad())?;
            let q: i64 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            Ok(Ratio::new(p, q))
        }
        None => Ok(Ratio::from_integer(s.trim().parse().map_err(|_| bad())?)),
    }
}

pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// The parameter pair (λ, N) with 0 ≤ λ < 1/2 and N ≥ 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasiRootParams {
    lambda: Rational,
    min_power: usize,
}

impl QuasiRootParams {
    pub fn new(lambda: Rational, min_power: usize) -> Result<Self> {
        if lambda < Ratio::zero() || lambda >= Ratio::new(1, 2) {
            return Err(Error::Precondition(format!(
                "lambda = {} is outside [0, 1/2)",
                lambda
            )));
        }
        Self::diagnostic(lambda, min_power)
    }

    /// Diagnostic constructor allowing λ in [0, 1]; used to exhibit the
    /// non-uniqueness of quasi-roots once λ reaches 1/2.
    pub fn diagnostic(lambda: Rational, min_power: usize) -> Result<Self> {
        if lambda < Ratio::zero() || lambda > Ratio::one() {
            return Err(Error::Precondition(format!(
                "lambda = {} is outside [0, 1]",
                lambda
            )));
        }
        if min_power < 2 {
            return Err(Error::Precondition(format!("N = {min_power} < 2")));
        }
        Ok(QuasiRootParams { lambda, min_power })
    }

    pub fn lambda(&self) -> Rational {
        self.lambda
    }

    pub fn min_power(&self) -> usize {
        self.min_power
    }

    /// Largest prefix/suffix length allowed for `h`: `⌊λ|h|⌋`.
    pub fn margin(&self, h_len: usize) -> usize {
        (self.lambda * Ratio::from_integer(h_len as i64))
            .floor()
            .to_integer() as usize
    }

    /// The uniqueness-theorem bound `N ≥ (2|V| + 1) / (1 − 2λ)`, compared
    /// exactly.
    pub fn meets_theorem_bound(&self, vertex_count: usize) -> bool {
        let n = Ratio::from_integer(self.min_power as i64);
        let need = Ratio::from_integer(2 * vertex_count as i64 + 1);
        n * (Ratio::one() - self.lambda * Ratio::from_integer(2)) >= need
    }

    /// Smallest integer N meeting the theorem bound for this λ.
    pub fn theorem_power(lambda: Rational, vertex_count: usize) -> usize {
        let need = Ratio::from_integer(2 * vertex_count as i64 + 1)
            / (Ratio::one() - lambda * Ratio::from_integer(2));
        need.ceil().to_integer() as usize
    }
}

/// A decomposition `h = a · gⁿ · b`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct QuasiRootDecomposition {
    pub a: GroupElement,
    pub g: GroupElement,
    pub n: usize,
    pub b: GroupElement,
}

impl QuasiRootDecomposition {
    pub fn assemble(&self) -> GroupElement {
        self.a.mul(&self.g.pow(self.n)).mul(&self.b)
    }
}

/// Per-condition diagnostics from [`verify_quasi_root`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub product_ok: bool,
    pub geodesic_ok: bool,
    pub power_ok: bool,
    pub a_bound_ok: bool,
    pub b_bound_ok: bool,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.product_ok && self.geodesic_ok && self.power_ok && self.a_bound_ok && self.b_bound_ok
    }

    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.product_ok {
            out.push("h != a g^n b");
        }
        if !self.geodesic_ok {
            out.push("decomposition is not geodesic");
        }
        if !self.power_ok {
            out.push("n < N");
        }
        if !self.a_bound_ok {
            out.push("|a| > lambda |h|");
        }
        if !self.b_bound_ok {
            out.push("|b| > lambda |h|");
        }
        out
    }
}

/// Checks the five defining conditions of a (λ,N)-quasi-root
/// decomposition of `h` and reports each separately.
pub fn verify_quasi_root(
    params: &QuasiRootParams,
    h: &GroupElement,
    d: &QuasiRootDecomposition,
) -> Result<VerifyReport> {
    if !h.same_graph(&d.a) || !h.same_graph(&d.g) || !h.same_graph(&d.b) {
        return Err(Error::GraphMismatch);
    }
    let h_len = Ratio::from_integer(h.len() as i64);
    let bound = params.lambda() * h_len;
    Ok(VerifyReport {
        product_ok: d.assemble() == *h,
        geodesic_ok: h.len() == d.a.len() + d.n * d.g.len() + d.b.len(),
        power_ok: d.n >= params.min_power(),
        a_bound_ok: Ratio::from_integer(d.a.len() as i64) <= bound,
        b_bound_ok: Ratio::from_integer(d.b.len() as i64) <= bound,
    })
}

/// Options for [`find_quasi_roots`].
#[derive(Debug, Clone)]
pub struct SearchOptions {
    /// Skip decompositions with `g = 1` (the degenerate root).
    pub nontrivial_only: bool,
    /// Total budget of downward-closed sets visited across the whole
    /// search.
    pub cap: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            nontrivial_only: true,
            cap: 1_000_000,
        }
    }
}

/// Shared enumeration budget; exceeding it aborts the search with
/// [`Error::CapExceeded`].
struct Budget {
    used: AtomicUsize,
    cap: usize,
}

impl Budget {
    fn new(cap: usize) -> Self {
        Budget {
            used: AtomicUsize::new(0),
            cap,
        }
    }

    /// Remaining slack, as a per-call cap for the enumeration helpers.
    fn charge(&self, amount: usize) -> Result<()> {
        let before = self.used.fetch_add(amount, Ordering::Relaxed);
        if before + amount > self.cap {
            return Err(Error::CapExceeded(before + amount));
        }
        Ok(())
    }

    fn remaining(&self) -> usize {
        self.cap.saturating_sub(self.used.load(Ordering::Relaxed))
    }
}

/// Candidate decompositions found for one geodesic prefix `a` of `h`.
fn search_one_prefix(
    params: &QuasiRootParams,
    h: &GroupElement,
    a: &GroupElement,
    margin: usize,
    opts: &SearchOptions,
    budget: &Budget,
) -> Result<Vec<QuasiRootDecomposition>> {
    let mut out = Vec::new();
    let rest = a.inverse().mul(h); // h = a · rest geodesic
    let rest_inv = rest.inverse();
    let d_b_max = margin.min(rest.len());
    let suffix_levels = enumerate_geodesic_prefixes_up_to(&rest_inv, d_b_max, budget.remaining())?;
    let mut visited = 0;
    for level in &suffix_levels {
        visited += level.len();
    }
    budget.charge(visited)?;
    for level in suffix_levels {
        for s in level {
            // rest = m · b geodesic with b = s^{-1}
            let b = s.inverse();
            let m = rest.mul(&s);
            if m.is_identity() {
                if !opts.nontrivial_only {
                    out.push(QuasiRootDecomposition {
                        a: a.clone(),
                        g: GroupElement::identity(h.graph()),
                        n: params.min_power(),
                        b,
                    });
                }
                continue;
            }
            // m = gⁿ geodesic with n ≥ 2 forces m cyclically reduced.
            if !is_cyclically_reduced(&m) {
                continue;
            }
            for n in params.min_power()..=m.len() {
                if m.len() % n != 0 {
                    continue;
                }
                for g in extract_nth_roots(&m, n, budget.remaining())? {
                    out.push(QuasiRootDecomposition {
                        a: a.clone(),
                        g,
                        n,
                        b: b.clone(),
                    });
                }
            }
        }
    }
    Ok(out)
}

fn search_impl(
    params: &QuasiRootParams,
    h: &GroupElement,
    opts: &SearchOptions,
    parallel: bool,
) -> Result<Vec<QuasiRootDecomposition>> {
    let margin = params.margin(h.len());
    let budget = Budget::new(opts.cap);
    let prefix_levels = enumerate_geodesic_prefixes_up_to(h, margin.min(h.len()), opts.cap)?;
    let mut visited = 0;
    for level in &prefix_levels {
        visited += level.len();
    }
    budget.charge(visited)?;
    let prefixes: Vec<GroupElement> = prefix_levels.into_iter().flatten().collect();

    let branch = |a: &GroupElement| search_one_prefix(params, h, a, margin, opts, &budget);
    let nested: Vec<Vec<QuasiRootDecomposition>> = run_branches(&prefixes, branch, parallel)?;

    let mut set: BTreeSet<QuasiRootDecomposition> = BTreeSet::new();
    for batch in nested {
        set.extend(batch);
    }
    let mut found: Vec<QuasiRootDecomposition> = set.into_iter().collect();
    // verify everything we hand out; the search must be sound
    for d in &found {
        debug_assert!(verify_quasi_root(params, h, d)?.ok());
    }
    found.sort();
    Ok(found)
}

#[cfg(feature = "parallel")]
fn run_branches<T: Send, F>(prefixes: &[GroupElement], branch: F, parallel: bool) -> Result<Vec<T>>
where
    F: Fn(&GroupElement) -> Result<T> + Sync + Send,
{
    use rayon::prelude::*;
    if parallel {
        prefixes.par_iter().map(branch).collect()
    } else {
        prefixes.iter().map(branch).collect()
    }
}

#[cfg(not(feature = "parallel"))]
fn run_branches<T: Send, F>(prefixes: &[GroupElement], branch: F, _parallel: bool) -> Result<Vec<T>>
where
    F: Fn(&GroupElement) -> Result<T> + Sync + Send,
{
    prefixes.iter().map(branch).collect()
}

/// Exhaustive quasi-root search: every geodesic prefix `a` with
/// `|a| ≤ ⌊λ|h|⌋`, every compatible suffix `b`, every admissible power of
/// the middle. Output is deduplicated on the canonical forms of
/// `(a, g, n, b)` and canonically sorted.
///
/// With the `parallel` feature the prefix branches fan out across threads;
/// the merged output is identical either way.
pub fn find_quasi_roots(
    params: &QuasiRootParams,
    h: &GroupElement,
    opts: &SearchOptions,
) -> Result<Vec<QuasiRootDecomposition>> {
    search_impl(params, h, opts, true)
}

/// Sequential variant of [`find_quasi_roots`]; same output, used as the
/// baseline in benchmarks.
pub fn find_quasi_roots_seq(
    params: &QuasiRootParams,
    h: &GroupElement,
    opts: &SearchOptions,
) -> Result<Vec<QuasiRootDecomposition>> {
    search_impl(params, h, opts, false)
}

/// Named hypothesis checks of the uniqueness theorem for a pair of
/// decompositions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniquenessHypotheses {
    pub same_h: bool,
    pub d1_valid: bool,
    pub d2_valid: bool,
    pub graph_connected: bool,
    pub power_bound: bool,
    pub g1_strongly_non_split: bool,
    pub g2_strongly_non_split: bool,
    pub g1_primitive: bool,
    pub g2_primitive: bool,
}

impl UniquenessHypotheses {
    pub fn all(&self) -> bool {
        self.same_h
            && self.d1_valid
            && self.d2_valid
            && self.graph_connected
            && self.power_bound
            && self.g1_strongly_non_split
            && self.g2_strongly_non_split
            && self.g1_primitive
            && self.g2_primitive
    }

    pub fn failures(&self) -> Vec<&'static str> {
        let named = [
            (self.same_h, "decompositions target different h"),
            (self.d1_valid, "first decomposition invalid"),
            (self.d2_valid, "second decomposition invalid"),
            (self.graph_connected, "graph not connected"),
            (self.power_bound, "N below (2|V|+1)/(1-2lambda)"),
            (self.g1_strongly_non_split, "g1 not strongly non-split"),
            (self.g2_strongly_non_split, "g2 not strongly non-split"),
            (self.g1_primitive, "g1 not primitive"),
            (self.g2_primitive, "g2 not primitive"),
        ];
        named
            .into_iter()
            .filter_map(|(ok, msg)| (!ok).then_some(msg))
            .collect()
    }
}

/// Result of [`check_uniqueness`]: the hypothesis list plus the three
/// conclusions. All three must hold whenever every hypothesis does; a
/// counterexample would falsify the uniqueness theorem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniquenessReport {
    pub hypotheses: UniquenessHypotheses,
    pub left_conjugate_equal: bool,
    pub right_conjugate_equal: bool,
    pub roots_conjugate: bool,
}

impl UniquenessReport {
    pub fn conclusions_hold(&self) -> bool {
        self.left_conjugate_equal && self.right_conjugate_equal && self.roots_conjugate
    }

    /// True only in the fatal case: hypotheses verified but a conclusion
    /// failed.
    pub fn theorem_violation(&self) -> bool {
        self.hypotheses.all() && !self.conclusions_hold()
    }
}

/// Checks the uniqueness theorem on a pair of quasi-root decompositions of
/// the same `h`: under the hypotheses, `a1 g1 a1^{-1} = a2 g2 a2^{-1}`,
/// `b1^{-1} g1 b1 = b2^{-1} g2 b2`, and the roots are conjugate.
///
/// When a hypothesis fails, the report is informational only.
pub fn check_uniqueness(
    params: &QuasiRootParams,
    h: &GroupElement,
    d1: &QuasiRootDecomposition,
    d2: &QuasiRootDecomposition,
    cap: usize,
) -> Result<UniquenessReport> {
    let graph = h.graph();
    let primitive = |g: &GroupElement| -> Result<bool> {
        if g.is_identity() {
            return Ok(false);
        }
        is_primitive(g, cap)
    };
    let hypotheses = UniquenessHypotheses {
        same_h: d1.assemble() == *h && d2.assemble() == *h,
        d1_valid: verify_quasi_root(params, h, d1)?.ok(),
        d2_valid: verify_quasi_root(params, h, d2)?.ok(),
        graph_connected: graph.is_connected(),
        power_bound: params.meets_theorem_bound(graph.vertex_count()),
        g1_strongly_non_split: is_strongly_non_split(&d1.g),
        g2_strongly_non_split: is_strongly_non_split(&d2.g),
        g1_primitive: primitive(&d1.g)?,
        g2_primitive: primitive(&d2.g)?,
    };

    let left1 = d1.a.mul(&d1.g).mul(&d1.a.inverse());
    let left2 = d2.a.mul(&d2.g).mul(&d2.a.inverse());
    let right1 = d1.b.inverse().mul(&d1.g).mul(&d1.b);
    let right2 = d2.b.inverse().mul(&d2.g).mul(&d2.b);
    let core1 = cyclically_reduce(&d1.g).h;
    let core2 = cyclically_reduce(&d2.g).h;
    Ok(UniquenessReport {
        hypotheses,
        left_conjugate_equal: left1 == left2,
        right_conjugate_equal: right1 == right2,
        roots_conjugate: are_conjugate_cyclically_reduced(&core1, &core2, cap)?,
    })
}

fn to_symbols(w: &Word) -> SymbolWord {
    SymbolWord::new(
        w.letters()
            .iter()
            .map(|l| SymbolLetter::new(l.vertex.0, l.inverse))
            .collect(),
    )
}

/// Report from [`check_step2`] / [`check_step3`]: the rotation aligning
/// the two normal forms plus the conjugator identities, re-verified inside
/// `G(Γ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepReport {
    pub rotation: usize,
    pub left_conjugate_equal: bool,
    pub right_conjugate_equal: bool,
}

fn require(ok: bool, msg: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Precondition(msg.to_owned()))
    }
}

/// SD-conical matching step: given `h = a1 p1^{n1} b1 = a2 p2^{n2} b2`
/// geodesic with `p_i` strongly non-split, SD-conical under `order` and
/// primitive, `n_i ≥ 3` and `|h| − (A+B) ≥ 3|p_i|`, the normal forms
/// `σ(p1)`, `σ(p2)` are cyclic rotations of each other and the conjugator
/// identities hold.
///
/// The proof pipeline runs as computation: both sides of the normal-form
/// factorization `σ(h) ≡ σ(aᵢ) σ(pᵢ)^{nᵢ−1} σ(pᵢbᵢ)` are checked
/// letter-for-letter, then the sequence-level matcher takes over with
/// `A' = A` and `B' = B + max|pᵢ|`.
pub fn check_step2(
    order: &VertexOrder,
    h: &GroupElement,
    d1: &QuasiRootDecomposition,
    d2: &QuasiRootDecomposition,
    bound_a: Rational,
    bound_b: Rational,
) -> Result<StepReport> {
    let int = |n: usize| Ratio::from_integer(n as i64);
    for (d, name) in [(d1, "first"), (d2, "second")] {
        require(
            d.assemble() == *h,
            &format!("{name} decomposition does not multiply to h"),
        )?;
        require(
            h.len() == d.a.len() + d.n * d.g.len() + d.b.len(),
            &format!("{name} decomposition is not geodesic"),
        )?;
        require(d.n >= 3, &format!("{name} power n = {} < 3", d.n))?;
        require(
            is_strongly_non_split(&d.g),
            &format!("{name} root not strongly non-split"),
        )?;
        require(
            is_sd_conical(&d.g, order),
            &format!("{name} root not SD-conical under the order"),
        )?;
        require(
            !d.g.is_identity() && is_primitive(&d.g, usize::MAX)?,
            &format!("{name} root not primitive"),
        )?;
        require(int(d.a.len()) <= bound_a, &format!("{name} |a| > A"))?;
        require(int(d.b.len()) <= bound_b, &format!("{name} |b| > B"))?;
        require(
            int(h.len()) - bound_a - bound_b >= int(3 * d.g.len()),
            &format!("window bound |h| - (A+B) >= 3|{name} root| fails"),
        )?;
    }

    // Normal-form factorization of σ(h) through each decomposition.
    let sigma_h = normal_form(h, order);
    let mut decomps = Vec::new();
    for d in [d1, d2] {
        let sa = normal_form(&d.a, order);
        let sp = normal_form(&d.g, order);
        let spb = normal_form(&d.g.mul(&d.b), order);
        let mut assembled = sa.clone();
        for _ in 0..d.n - 1 {
            assembled = assembled.concat(&sp);
        }
        assembled = assembled.concat(&spb);
        if assembled != sigma_h {
            return Err(Error::TheoremViolation(
                "normal-form factorization sigma(a) sigma(p)^{n-1} sigma(p b) != sigma(h)".into(),
            ));
        }
        decomps.push(WordDecomposition {
            a: to_symbols(&sa),
            root: to_symbols(&sp),
            power: d.n - 1,
            b: to_symbols(&spb),
        });
    }

    let max_root = d1.g.len().max(d2.g.len());
    let (rotation, _) = match_word_quasiroots(
        &to_symbols(&sigma_h),
        &decomps[0],
        &decomps[1],
        bound_a,
        bound_b + int(max_root),
    )
    .map_err(|e| match e {
        Error::ConclusionFailed(msg) => Error::TheoremViolation(msg),
        other => other,
    })?;

    let left1 = d1.a.mul(&d1.g).mul(&d1.a.inverse());
    let left2 = d2.a.mul(&d2.g).mul(&d2.a.inverse());
    let right1 = d1.b.inverse().mul(&d1.g).mul(&d1.b);
    let right2 = d2.b.inverse().mul(&d2.g).mul(&d2.b);
    if left1 != left2 || right1 != right2 {
        return Err(Error::TheoremViolation(
            "conjugator identities fail in G(Gamma)".into(),
        ));
    }
    Ok(StepReport {
        rotation,
        left_conjugate_equal: true,
        right_conjugate_equal: true,
    })
}

/// Final step: reduce two quasi-root decompositions with strongly
/// non-split primitive roots to the SD-conical case via conical
/// conjugation, run [`check_step2`], and pull the identities back through
/// `gᵢ = cᵢ pᵢ cᵢ^{-1} = dᵢ^{-1} pᵢ dᵢ`.
pub fn check_step3(
    h: &GroupElement,
    d1: &QuasiRootDecomposition,
    d2: &QuasiRootDecomposition,
    bound_a: Rational,
    bound_b: Rational,
) -> Result<StepReport> {
    let int = |n: usize| Ratio::from_integer(n as i64);
    let vcount = h.graph().vertex_count();
    require(h.graph().is_connected(), "graph not connected")?;
    for (d, name) in [(d1, "first"), (d2, "second")] {
        require(
            d.assemble() == *h,
            &format!("{name} decomposition does not multiply to h"),
        )?;
        require(
            h.len() == d.a.len() + d.n * d.g.len() + d.b.len(),
            &format!("{name} decomposition is not geodesic"),
        )?;
        require(d.n >= 1, &format!("{name} power n = {} < 1", d.n))?;
        require(
            is_strongly_non_split(&d.g),
            &format!("{name} root not strongly non-split"),
        )?;
        require(
            !d.g.is_identity() && is_primitive(&d.g, usize::MAX)?,
            &format!("{name} root not primitive"),
        )?;
        require(int(d.a.len()) <= bound_a, &format!("{name} |a| > A"))?;
        require(int(d.b.len()) <= bound_b, &format!("{name} |b| > B"))?;
        require(
            int(h.len()) - bound_a - bound_b >= int((2 * vcount + 1) * d.g.len()),
            &format!("length bound |h| - (A+B) >= (2|V|+1)|{name} root| fails"),
        )?;
    }
    // The bound forces n_i >= 2V + 1, hence g_i^{n_i} geodesic and g_i
    // cyclically reduced.
    debug_assert!(is_cyclically_reduced(&d1.g) && is_cyclically_reduced(&d2.g));

    let (order, v1, v2) = choose_order_for_pair(&d1.g, &d2.g)?;
    let r = d1.g.len().max(d2.g.len());
    let widened_a = bound_a + int((vcount - 1) * r);
    let widened_b = bound_b + int((vcount - 1) * r);

    let mut lifted = Vec::new();
    for (d, v) in [(d1, v1), (d2, v2)] {
        let cc = conical_conjugate(&d.g, v)?;
        // g^n = c p^{n-k} d, so h = (a c) p^{n-k} (d b).
        lifted.push(QuasiRootDecomposition {
            a: d.a.mul(&cc.a),
            g: cc.p,
            n: d.n - cc.k,
            b: cc.b.mul(&d.b),
        });
    }
    let report = check_step2(&order, h, &lifted[0], &lifted[1], widened_a, widened_b)?;

    let left1 = d1.a.mul(&d1.g).mul(&d1.a.inverse());
    let left2 = d2.a.mul(&d2.g).mul(&d2.a.inverse());
    let right1 = d1.b.inverse().mul(&d1.g).mul(&d1.b);
    let right2 = d2.b.inverse().mul(&d2.g).mul(&d2.b);
    if left1 != left2 || right1 != right2 {
        return Err(Error::TheoremViolation(
            "pulled-back conjugator identities fail in G(Gamma)".into(),
        ));
    }
    Ok(report)
}

/// Limits for [`generate_instance`].
#[derive(Debug, Clone)]
pub struct InstanceLimits {
    pub max_vertices: usize,
    pub max_root_len: usize,
}

impl Default for InstanceLimits {
    fn default() -> Self {
        InstanceLimits {
            max_vertices: 6,
            max_root_len: 6,
        }
    }
}

/// A generated test instance: the graph, the parameters, the element `h`
/// and the planted decomposition witnessing a quasi-root.
#[derive(Debug, Clone)]
pub struct Instance {
    pub graph: Arc<DefiningGraph>,
    pub params: QuasiRootParams,
    pub h: GroupElement,
    pub planted: QuasiRootDecomposition,
}

fn random_connected_graph(rng: &mut ChaCha8Rng, max_vertices: usize) -> Arc<DefiningGraph> {
    let nv = rng.gen_range(2..=max_vertices.max(2));
    let names: Vec<String> = (1..=nv).map(|i| format!("v{i}")).collect();
    loop {
        let mut edges = Vec::new();
        for i in 0..nv {
            for j in (i + 1)..nv {
                if rng.gen_bool(0.5) {
                    edges.push((names[i].clone(), names[j].clone()));
                }
            }
        }
        let graph = DefiningGraph::new(&names, &edges).expect("generated names are valid");
        if graph.is_connected() {
            return Arc::new(graph);
        }
    }
}

fn random_reduced_element(
    rng: &mut ChaCha8Rng,
    graph: &Arc<DefiningGraph>,
    len: usize,
) -> GroupElement {
    // Extend letter by letter, skipping letters that would cancel.
    let mut letters: Vec<Letter> = Vec::with_capacity(len);
    let nv = graph.vertex_count() as u32;
    while letters.len() < len {
        let letter = Letter::new(
            crate::graph::VertexId(rng.gen_range(0..nv)),
            rng.gen_bool(0.5),
        );
        let mut candidate = letters.clone();
        crate::words::push_reduced(graph, &mut candidate, letter);
        if candidate.len() > letters.len() {
            letters = candidate;
        }
    }
    GroupElement::from_word(graph, &Word::new(letters))
}

/// Deterministically samples `(Γ, λ, N, h, planted)` from a seed: a random
/// connected graph, a random cyclically reduced strongly non-split
/// primitive root `g`, `n = N = ⌈(2|V|+1)/(1−2λ)⌉`, and margins `a`, `b`
/// within the λ budget, all re-verified before returning.
pub fn generate_instance(seed: u64, limits: &InstanceLimits) -> Result<Instance> {
    const MAX_ATTEMPTS: usize = 10_000;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lambdas = [
        Ratio::zero(),
        Ratio::new(1, 4),
        Ratio::new(2, 5),
    ];

    for _ in 0..MAX_ATTEMPTS {
        let graph = random_connected_graph(&mut rng, limits.max_vertices);
        let lambda = *lambdas.choose(&mut rng).expect("nonempty");
        let n = QuasiRootParams::theorem_power(lambda, graph.vertex_count());
        let params = QuasiRootParams::new(lambda, n)?;

        let mut root = None;
        for _ in 0..200 {
            let len = rng.gen_range(1..=limits.max_root_len);
            let g = random_reduced_element(&mut rng, &graph, len);
            if g.is_identity()
                || !is_cyclically_reduced(&g)
                || !is_strongly_non_split(&g)
                || !is_primitive(&g, 1_000_000)?
            {
                continue;
            }
            root = Some(g);
            break;
        }
        let Some(g) = root else { continue };

        let core = g.pow(n);
        let mut planted = None;
        for _ in 0..200 {
            let (a, b) = if lambda.is_zero() {
                (
                    GroupElement::identity(&graph),
                    GroupElement::identity(&graph),
                )
            } else {
                let la = rng.gen_range(0..=3);
                let lb = rng.gen_range(0..=3);
                (
                    random_reduced_element(&mut rng, &graph, la),
                    random_reduced_element(&mut rng, &graph, lb),
                )
            };
            let h = a.mul(&core).mul(&b);
            if h.len() != a.len() + core.len() + b.len() {
                continue;
            }
            let d = QuasiRootDecomposition {
                a,
                g: g.clone(),
                n,
                b,
            };
            if verify_quasi_root(&params, &h, &d)?.ok() {
                planted = Some((h, d));
                break;
            }
        }
        if let Some((h, planted)) = planted {
            return Ok(Instance {
                graph,
                params,
                h,
                planted,
            });
        }
    }
    Err(Error::SamplingExhausted(MAX_ATTEMPTS))
}

/// Random reduced element of the given length; shared with the external
/// harnesses.
pub fn random_element_with(
    rng: &mut ChaCha8Rng,
    graph: &Arc<DefiningGraph>,
    len: usize,
) -> GroupElement {
    random_reduced_element(rng, graph, len)
}
