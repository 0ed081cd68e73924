//! Acceptance gate: one test per criterion, each printing a single
//! PASS/FAIL line. Run with `cargo test --test acceptance -- --nocapture`
//! to see the lines.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use raag::normalform::{
    conical_conjugate, is_pyramidal, is_sd_conical, normal_form, starting_generators,
};
use raag::quasiroot::{
    check_uniqueness, find_quasi_roots, generate_instance, verify_quasi_root, InstanceLimits,
    QuasiRootParams, Rational, SearchOptions,
};
use raag::seqwords::{merge_periods, match_word_quasiroots, SymbolLetter, SymbolWord, WordDecomposition};
use raag::structure::{
    are_conjugate_cyclically_reduced, cyclic_conjugates, cyclically_reduce, extract_nth_roots,
    is_cyclically_reduced, is_non_split, is_strongly_non_split,
};
use raag::{DefiningGraph, Error, GroupElement, Letter, VertexId, Word};

const CAP: usize = 1_000_000;

fn report(criterion: usize, desc: &str, ok: bool) {
    let verdict = if ok { "PASS" } else { "FAIL" };
    println!("ACCEPTANCE {criterion}: {verdict} - {desc}");
    assert!(ok, "acceptance criterion {criterion} failed: {desc}");
}

fn graph(n: usize) -> Arc<DefiningGraph> {
    Arc::new(DefiningGraph::path(n))
}

fn e(g: &Arc<DefiningGraph>, s: &str) -> GroupElement {
    GroupElement::parse(g, s).unwrap()
}

/// Every distinct element representable by a word of length <= max_len.
fn all_elements(g: &Arc<DefiningGraph>, max_len: usize) -> Vec<GroupElement> {
    let letters: Vec<Letter> = g
        .vertices()
        .flat_map(|v| [Letter::new(v, false), Letter::new(v, true)])
        .collect();
    let mut out: BTreeSet<GroupElement> = BTreeSet::from([GroupElement::identity(g)]);
    let mut frontier: Vec<Vec<Letter>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for &l in &letters {
                let mut ext = w.clone();
                ext.push(l);
                out.insert(GroupElement::from_word(g, &Word::new(ext.clone())));
                next.push(ext);
            }
        }
        frontier = next;
    }
    out.into_iter().collect()
}

#[test]
fn criterion_1_worked_example_fixtures() {
    let p5 = graph(5);
    let order = p5.default_order();

    let g1 = e(&p5, "v2 v3 v5^-1 v5^-1");
    let g2 = e(&p5, "v2 v3");
    let g3 = e(&p5, "v2 v3 v4");
    let classifications = !is_non_split(&g1)
        && is_non_split(&g2)
        && !is_strongly_non_split(&g2)
        && is_strongly_non_split(&g3);

    let g = e(&p5, "v2 v4^-1 v3^-1 v5");
    let nf_ok = normal_form(&g, &order).display(&p5) == "v4^-1 v5 v2 v3^-1";
    let startings_ok = starting_generators(&g)
        == BTreeSet::from([p5.vertex("v2").unwrap(), p5.vertex("v4").unwrap()]);

    let pyr_sd = |s: &str| {
        let x = e(&p5, s);
        (is_pyramidal(&x, &order), is_sd_conical(&x, &order))
    };
    let verdicts = pyr_sd("v2 v3^-1 v4^-1 v5") == (true, true)
        && pyr_sd("v4 v5") == (true, false)
        && pyr_sd("v2 v1 v3 v4") == (false, true);

    report(
        1,
        "worked-example fixtures (classification, normal form, S(g), pyramidal/SD-conical)",
        classifications && nf_ok && startings_ok && verdicts,
    );
}

#[test]
fn criterion_2_cyclically_reduced_equivalence() {
    let mut ok = true;
    for nv in [3, 4] {
        let g = graph(nv);
        let elements = all_elements(&g, 4);
        let conjugators: Vec<GroupElement> = elements.clone();
        ok &= elements.par_iter().all(|x| {
            // (i) brute-force minimal length in conjugacy class, |u| <= 4
            let minimal = conjugators
                .iter()
                .all(|u| u.inverse().mul(x).mul(u).len() >= x.len());
            // (ii) no strip applies
            let no_strip = cyclically_reduce(x).u.is_identity();
            // (iii), (iv) geodesic powers
            let sq = x.pow(2).len() == 2 * x.len();
            let cube = x.pow(3).len() == 3 * x.len();
            // (v) all cyclic conjugates have the same length
            let same_len = cyclic_conjugates(x, CAP)
                .unwrap()
                .iter()
                .all(|c| c.len() == x.len());
            minimal == no_strip && no_strip == sq && sq == cube && cube == same_len
        });
    }
    report(2, "five characterizations of cyclically reduced agree (exhaustive, len <= 4, P3/P4)", ok);
}

fn random_connected_graph(rng: &mut ChaCha8Rng, max_vertices: usize) -> Arc<DefiningGraph> {
    let nv = rng.gen_range(2..=max_vertices);
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
        let g = DefiningGraph::new(&names, &edges).unwrap();
        if g.is_connected() {
            return Arc::new(g);
        }
    }
}

#[test]
fn criterion_3_conical_conjugate_invariants() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut done = 0;
    let mut ok = true;
    while done < 1000 {
        let g = random_connected_graph(&mut rng, 6);
        let len = rng.gen_range(1..=6);
        let x = raag::quasiroot::random_element_with(&mut rng, &g, len);
        if x.is_identity() || !is_non_split(&x) || !is_cyclically_reduced(&x) {
            continue;
        }
        let supp: Vec<VertexId> = x.support().into_iter().collect();
        let v0 = supp[rng.gen_range(0..supp.len())];
        let r = conical_conjugate(&x, v0).unwrap();
        let invariants = r.violated_invariants(&x);
        if !invariants.is_empty() {
            eprintln!("invariants violated for {x}: {invariants:?}");
            ok = false;
        }
        ok &= r.k <= g.vertex_count() - 1;
        // g^n = a p^{n-k} b geodesic for n = |V|
        let n = g.vertex_count();
        if n >= r.k {
            let product = r.a.mul(&r.p.pow(n - r.k)).mul(&r.b);
            ok &= product == x.pow(n);
            ok &= r.a.len() + (n - r.k) * r.p.len() + r.b.len() == n * x.len();
        }
        done += 1;
    }
    report(3, "conical conjugate invariants on 1000 sampled instances", ok);
}

#[test]
fn criterion_4_normal_form_factorization() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut done = 0;
    let mut ok = true;
    while done < 1000 {
        let g = random_connected_graph(&mut rng, 6);
        let order = g.default_order();
        let len = rng.gen_range(1..=5);
        let p = raag::quasiroot::random_element_with(&mut rng, &g, len);
        if p.is_identity() || !is_strongly_non_split(&p) || !is_sd_conical(&p, &order) {
            continue;
        }
        let n = rng.gen_range(1..=4);
        let la = rng.gen_range(0..=3);
        let lb = rng.gen_range(0..=3);
        let a = raag::quasiroot::random_element_with(&mut rng, &g, la);
        let b = raag::quasiroot::random_element_with(&mut rng, &g, lb);
        let h = a.mul(&p.pow(n)).mul(&b);
        if h.len() != a.len() + n * p.len() + b.len() {
            continue; // not geodesic; resample
        }
        // sigma(a p^n b) = sigma(a) sigma(p)^{n-1} sigma(p b), letter for letter
        let mut rhs = normal_form(&a, &order);
        let sp = normal_form(&p, &order);
        for _ in 0..n - 1 {
            rhs = rhs.concat(&sp);
        }
        rhs = rhs.concat(&normal_form(&p.mul(&b), &order));
        ok &= normal_form(&h, &order) == rhs;
        done += 1;
    }
    report(4, "normal-form factorization holds on 1000 sampled geodesic products", ok);
}

fn has_period(w: &[u8], p: usize) -> bool {
    (p..w.len()).all(|i| w[i] == w[i - p])
}

fn sym_word(w: &[u8]) -> SymbolWord {
    SymbolWord::new(w.iter().map(|&c| SymbolLetter::new(c as u32, false)).collect())
}

#[test]
fn criterion_5_sequence_suite() {
    // Fine-Wilf: merge_periods vs brute force, alphabet 3, window <= 12.
    let fw_ok = (2..=12usize).into_par_iter().all(|len| {
        let mut seq = vec![0u8; len];
        loop {
            let word = sym_word(&seq);
            for p in 1..len {
                for q in p..len {
                    if p + q > len {
                        continue;
                    }
                    let both = has_period(&seq, p) && has_period(&seq, q);
                    match merge_periods(p, q, &word) {
                        Ok(g) => {
                            if !both || g != gcd(p, q) || !has_period(&seq, g) {
                                return false;
                            }
                        }
                        Err(Error::InconsistentPeriods(_)) => {
                            if both {
                                return false;
                            }
                        }
                        Err(_) => return false,
                    }
                }
            }
            // next sequence over {0,1,2}
            let mut i = 0;
            while i < len && seq[i] == 2 {
                seq[i] = 0;
                i += 1;
            }
            if i == len {
                break;
            }
            seq[i] += 1;
        }
        true
    });

    // match_word_quasiroots: never a conclusion failure when preconditions
    // hold, exhaustive over alphabet {a, b}, |w| <= 14.
    let match_ok = (2..=14usize).into_par_iter().all(|len| {
        let mut bits = vec![0u8; len];
        loop {
            let w = sym_word(&bits);
            let mut decomps = Vec::new();
            for alen in 0..len {
                for rootlen in 1..=(len - alen) / 2 {
                    for power in 2..=(len - alen) / rootlen {
                        let blen = len - alen - rootlen * power;
                        let root = SymbolWord::new(w.letters()[alen..alen + rootlen].to_vec());
                        if raag::seqwords::seq_is_primitive(&root) != Ok(true) {
                            continue;
                        }
                        let d = WordDecomposition {
                            a: SymbolWord::new(w.letters()[..alen].to_vec()),
                            root,
                            power,
                            b: SymbolWord::new(w.letters()[len - blen..].to_vec()),
                        };
                        if d.assemble() == w {
                            decomps.push(d);
                        }
                    }
                }
            }
            for d1 in &decomps {
                for d2 in &decomps {
                    let ba = Rational::from_integer(d1.a.len().max(d2.a.len()) as i64);
                    let bb = Rational::from_integer(d1.b.len().max(d2.b.len()) as i64);
                    let window = Rational::from_integer(len as i64) - ba - bb;
                    let need =
                        Rational::from_integer(2 * d1.root.len().max(d2.root.len()) as i64);
                    if window < need {
                        continue;
                    }
                    if let Err(Error::ConclusionFailed(_)) =
                        match_word_quasiroots(&w, d1, d2, ba, bb)
                    {
                        return false;
                    }
                }
            }
            let mut i = 0;
            while i < len && bits[i] == 1 {
                bits[i] = 0;
                i += 1;
            }
            if i == len {
                break;
            }
            bits[i] += 1;
        }
        true
    });
    report(5, "Fine-Wilf brute force and exhaustive sequence matching", fw_ok && match_ok);
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[test]
fn criterion_6_uniqueness_harness() {
    // Harness cap kept far below the library default so capped searches
    // (large lambda, long h) are skipped quickly instead of dominating the
    // run; skips are counted, violations are never tolerated.
    const HARNESS_CAP: usize = 500;
    let limits = InstanceLimits::default();
    let results: Vec<(u64, u64, u64)> = (0u64..500)
        .into_par_iter()
        .map(|seed| {
            let inst = generate_instance(seed, &limits).unwrap();
            assert!(verify_quasi_root(&inst.params, &inst.h, &inst.planted)
                .unwrap()
                .ok());
            let found = match find_quasi_roots(
                &inst.params,
                &inst.h,
                &SearchOptions {
                    nontrivial_only: true,
                    cap: HARNESS_CAP,
                },
            ) {
                Ok(found) => found,
                Err(Error::CapExceeded(_)) => return (0, 1, 0),
                Err(e) => panic!("search failed: {e}"),
            };
            let mut violations = 0;
            let candidates: Vec<_> = found
                .iter()
                .filter(|d| {
                    is_strongly_non_split(&d.g)
                        && raag::structure::is_primitive(&d.g, HARNESS_CAP).unwrap()
                })
                .collect();
            for i in 0..candidates.len() {
                for j in i..candidates.len() {
                    let r = check_uniqueness(
                        &inst.params,
                        &inst.h,
                        candidates[i],
                        candidates[j],
                        HARNESS_CAP,
                    )
                    .unwrap();
                    if r.theorem_violation() {
                        violations += 1;
                    }
                }
            }
            (1, 0, violations)
        })
        .collect();
    let checked: u64 = results.iter().map(|r| r.0).sum();
    let skipped: u64 = results.iter().map(|r| r.1).sum();
    let violations: u64 = results.iter().map(|r| r.2).sum();
    println!("criterion 6 detail: checked={checked} skipped={skipped} violations={violations}");
    report(
        6,
        "uniqueness theorem harness over 500 seeded instances (zero violations)",
        violations == 0 && checked >= 100 && checked + skipped == 500,
    );
}

#[test]
fn criterion_7_non_uniqueness_witnesses() {
    // (a) lambda = 1/7 on (v2^3 v3^3 v5)^5
    let p5 = graph(5);
    let params = QuasiRootParams::new(Rational::new(1, 7), 2).unwrap();
    let h = e(&p5, "v2 v2 v2 v3 v3 v3 v5").pow(5);
    let found = find_quasi_roots(&params, &h, &SearchOptions::default()).unwrap();
    let long = e(&p5, "v2 v2 v2 v3 v3 v3 v5");
    let short = e(&p5, "v2 v2 v2 v3 v3 v3");
    let has_long = found.iter().any(|d| d.g == long);
    let has_short = found.iter().any(|d| d.g == short);
    let not_conjugate = !are_conjugate_cyclically_reduced(&long, &short, CAP).unwrap();

    // (b) diagnostic lambda = 1/2 on h = v1^5 v2^5 over a single edge
    let f2 = Arc::new(DefiningGraph::new(&["v1", "v2"], &[("v1", "v2")]).unwrap());
    let diag = QuasiRootParams::diagnostic(Rational::new(1, 2), 2).unwrap();
    let h2 = e(&f2, "v1 v1 v1 v1 v1 v2 v2 v2 v2 v2");
    let found2 = find_quasi_roots(&diag, &h2, &SearchOptions::default()).unwrap();
    let v1 = e(&f2, "v1");
    let v2 = e(&f2, "v2");
    let has_v1 = found2.iter().any(|d| d.g == v1);
    let has_v2 = found2.iter().any(|d| d.g == v2);
    let not_conjugate2 = !are_conjugate_cyclically_reduced(&v1, &v2, CAP).unwrap();

    report(
        7,
        "non-uniqueness witnesses reproduce (lambda = 1/7 pair; diagnostic lambda = 1/2 pair)",
        found.len() >= 2 && has_long && has_short && not_conjugate
            && has_v1 && has_v2 && not_conjugate2,
    );
}

#[test]
fn criterion_8_root_uniqueness() {
    let mut ok = true;
    for nv in [3, 4] {
        let g = graph(nv);
        for x in all_elements(&g, 4) {
            if !is_cyclically_reduced(&x) {
                continue;
            }
            for n in 2..=4usize {
                if !x.is_identity() && x.len() % n != 0 {
                    continue;
                }
                let roots = extract_nth_roots(&x, n, CAP).unwrap();
                ok &= roots.len() <= 1;
                // and powers recover their unique root
                if !x.is_identity() {
                    let roots_of_power = extract_nth_roots(&x.pow(n), n, CAP).unwrap();
                    ok &= roots_of_power == vec![x.clone()];
                }
            }
        }
    }
    report(8, "n-th roots are unique on all tested instances", ok);
}
