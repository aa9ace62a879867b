use std::collections::BTreeSet;
use std::path::Path;

use lil_core::algebra::BlockSummary;
use lil_core::exact::Subspace;
use lil_core::ideals::{self, BlockIdeal, IdealError, IdealWitness, PairList};
use lil_core::lie::{self, addend, LieError, LieIdealDescriptor, LieWitness};
use lil_core::nest::{self, Atoms};
use lil_core::similarity::{self, SimError};
use lil_core::suite::{self, SuiteConfig};
use lil_core::tower::TowerSpec;
use lil_core::{corpus, random, DigraphAlgebra};
use serde_json::{json, Value};

use crate::report::{
    bad, basis_matrices, input_err, load_algebra, load_json, load_matrices, load_pattern, load_subspace, path_str,
    to_value, Caps, InputError, Report,
};

fn pairs(list: &str) -> Result<Vec<(usize, usize)>, InputError> {
    list.parse::<PairList>().map(|p| p.0).map_err(|e| input_err!("block pairs {list:?}: {e}"))
}

/// An off-diagonal ideal given as its full list of block pairs.
fn offdiag_ideal(alg: &DigraphAlgebra, list: &str) -> Result<BlockIdeal, InputError> {
    let p = alg.blocks().count();
    let k = BlockIdeal::from_pairs(pairs(list)?);
    for &(u, v) in k.pairs() {
        if u >= p || v >= p || u == v || !alg.blocks().leq(u, v) {
            return Err(input_err!("({},{}) is not a strict block pair of the pattern", u + 1, v + 1));
        }
    }
    if !k.is_up_closed(alg) {
        let closed = ideals::ideal_closure(alg, &k.pairs().iter().copied().collect::<Vec<_>>())
            .map_err(bad("ideal"))?;
        return Err(input_err!("{list:?} is not up-closed; its closure is {closed:?}", closed = closed.to_string()));
    }
    Ok(k)
}

fn ideal_json(alg: &DigraphAlgebra, k: &BlockIdeal) -> Value {
    json!({ "block_pairs": k.one_based(), "dim": ideals::to_subspace(alg, k).dim() })
}

fn lie_witness_json(w: &LieWitness) -> Value {
    json!({ "unit": [w.unit.0 + 1, w.unit.1 + 1], "basis": w.basis, "bracket": w.bracket })
}

fn ideal_witness_json(w: &IdealWitness) -> Value {
    json!({ "unit": [w.unit.0 + 1, w.unit.1 + 1], "basis": w.basis, "side": w.side })
}

fn descriptor_json(d: &LieIdealDescriptor) -> Value {
    json!({
        "k": d.k.one_based(),
        "kinds": d.kinds,
        "linkage": d.one_based_linkage(),
        "scalar_tuples": d.scalar_tuples,
    })
}

fn lie_err(e: LieError) -> InputError {
    match e {
        LieError::NotLieIdeal(w) => input_err!("not a Lie ideal; witness {}", lie_witness_json(&w)),
        other => input_err!("{other}"),
    }
}

fn pattern_input(path: &Path) -> Value {
    json!({ "pattern": path_str(path) })
}

pub fn validate(caps: &Caps, pattern: &Path) -> Result<Report, InputError> {
    let alg = load_algebra(pattern, caps)?;
    Ok(Report::new("validate", pattern_input(pattern), true, to_value(&BlockSummary::from(&alg))))
}

pub fn ideals_enumerate(caps: &Caps, pattern: &Path) -> Result<Report, InputError> {
    let alg = load_algebra(pattern, caps)?;
    let found = ideals::enumerate_offdiag_ideals(&alg, caps.max_pairs).map_err(bad("enumerate"))?;
    let distinct: BTreeSet<&BlockIdeal> = found.iter().collect();
    let mut ok = distinct.len() == found.len();
    for k in &found {
        let s = ideals::to_subspace(&alg, k);
        ok &= k.is_off_diagonal()
            && k.is_up_closed(&alg)
            && ideals::is_associative_ideal(&alg, &s).map_err(bad("ideal check"))?.is_none();
    }
    let inputs = json!({ "pattern": path_str(pattern), "max_pairs": caps.max_pairs });
    let list: Vec<Value> = found.iter().map(|k| ideal_json(&alg, k)).collect();
    Ok(Report::new("ideals enumerate", inputs, ok, json!({ "count": found.len(), "ideals": list })))
}

pub fn ideals_close(caps: &Caps, pattern: &Path, seed: &str) -> Result<Report, InputError> {
    let alg = load_algebra(pattern, caps)?;
    let k = ideals::ideal_closure(&alg, &pairs(seed)?).map_err(|e| match e {
        IdealError::NotInPattern(..) => input_err!("{e}"),
        other => input_err!("closure: {other}"),
    })?;
    let s = ideals::to_subspace(&alg, &k);
    let ok = k.is_up_closed(&alg) && ideals::is_associative_ideal(&alg, &s).map_err(bad("ideal check"))?.is_none();
    let inputs = json!({ "pattern": path_str(pattern), "seed": seed });
    Ok(Report::new("ideals close", inputs, ok, ideal_json(&alg, &k)))
}

/// Decomposition and descriptor of a Lie ideal, plus whether the descriptor
/// rebuilds it exactly.
fn classify_lie(alg: &DigraphAlgebra, l: &Subspace) -> Result<(bool, Value), InputError> {
    let dec = lie::decompose(alg, l).map_err(lie_err)?;
    let desc = addend::classify_addend(alg, &dec.ideal, &dec.g).map_err(lie_err)?;
    let (f, _) = lie::maximal_addend(alg, &dec.ideal).map_err(lie_err)?;
    let k_assoc = ideals::is_associative_ideal(alg, &dec.k).map_err(bad("ideal check"))?.is_none();
    let round_trip = desc.to_subspace(alg) == *l;
    let g_in_f = dec.g.is_subspace_of(&f).map_err(bad("subspace"))?;
    let sum = dec.g.sum(&dec.k).map_err(bad("subspace"))? == *l;
    let n = alg.n();
    let details = json!({
        "g": { "dim": dec.g.dim(), "basis": basis_matrices(n, &dec.g) },
        "k": { "block_pairs": dec.ideal.one_based(), "dim": dec.k.dim() },
        "descriptor": descriptor_json(&desc),
        "checks": {
            "g_plus_k_is_l": sum,
            "k_associative": k_assoc,
            "g_in_max_addend": g_in_f,
            "descriptor_round_trip": round_trip,
        },
    });
    Ok((sum && k_assoc && g_in_f && round_trip, details))
}

pub fn lie_check(caps: &Caps, pattern: &Path, subspace: &Path) -> Result<Report, InputError> {
    let alg = load_algebra(pattern, caps)?;
    let s = load_subspace(subspace, &alg)?;
    let inputs = json!({ "pattern": path_str(pattern), "subspace": path_str(subspace) });
    let assoc = ideals::is_associative_ideal(&alg, &s).map_err(bad("ideal check"))?;
    let lie = lie::is_lie_ideal(&alg, &s).map_err(lie_err)?;
    let mut details = json!({
        "dim": s.dim(),
        "is_lie_ideal": lie.is_none(),
        "is_associative_ideal": assoc.is_none(),
        "lie_witness": lie.as_ref().map(lie_witness_json),
        "ideal_witness": assoc.as_ref().map(ideal_witness_json),
    });
    // Every associative ideal is a Lie ideal.
    let mut ok = assoc.is_some() || lie.is_none();
    if lie.is_none() {
        let (passed, classification) = classify_lie(&alg, &s)?;
        ok &= passed;
        details["classification"] = classification;
    }
    Ok(Report::new("lie check", inputs, ok, details))
}

pub fn lie_generate(caps: &Caps, pattern: &Path, gens: &Path) -> Result<Report, InputError> {
    let alg = load_algebra(pattern, caps)?;
    let ms = load_matrices(gens, &alg)?;
    let l = lie::lie_generate(&alg, &ms).map_err(lie_err)?;
    let is_lie = lie::is_lie_ideal(&alg, &l).map_err(lie_err)?.is_none();
    let contains = ms.iter().all(|m| l.contains(m.coords()).unwrap_or(false));
    let (passed, classification) = classify_lie(&alg, &l)?;
    let inputs = json!({ "pattern": path_str(pattern), "gens": path_str(gens) });
    let details = json!({
        "subspace": l,
        "dim": l.dim(),
        "is_lie_ideal": is_lie,
        "contains_generators": contains,
        "classification": classification,
    });
    Ok(Report::new("lie generate", inputs, is_lie && contains && passed, details))
}

pub fn lie_decompose(caps: &Caps, pattern: &Path, subspace: &Path) -> Result<Report, InputError> {
    let alg = load_algebra(pattern, caps)?;
    let s = load_subspace(subspace, &alg)?;
    let (passed, details) = classify_lie(&alg, &s)?;
    let inputs = json!({ "pattern": path_str(pattern), "subspace": path_str(subspace) });
    Ok(Report::new("lie decompose", inputs, passed, details))
}

pub fn lie_max_addend(caps: &Caps, pattern: &Path, ideal: &str) -> Result<Report, InputError> {
    let alg = load_algebra(pattern, caps)?;
    let k = offdiag_ideal(&alg, ideal)?;
    let (f, graph) = lie::maximal_addend(&alg, &k).map_err(lie_err)?;
    let ks = ideals::to_subspace(&alg, &k);
    let lie_ok = lie::is_lie_ideal(&alg, &f.sum(&ks).map_err(bad("subspace"))?).map_err(lie_err)?.is_none();
    let triangular = lie::triangular_constraint_space(&alg, &k).map(|t| t == f);
    let inputs = json!({ "pattern": path_str(pattern), "ideal": ideal });
    let details = json!({
        "k": ideal_json(&alg, &k),
        "f": { "dim": f.dim(), "basis": basis_matrices(alg.n(), &f) },
        "constraint_graph": graph.one_based(),
        "checks": { "f_plus_k_is_lie": lie_ok, "triangular_formula": triangular },
    });
    Ok(Report::new("lie max-addend", inputs, lie_ok && triangular != Some(false), details))
}

pub fn lie_classify(caps: &Caps, pattern: &Path, ideal: &str, addend_path: &Path) -> Result<Report, InputError> {
    let alg = load_algebra(pattern, caps)?;
    let k = offdiag_ideal(&alg, ideal)?;
    let g = load_subspace(addend_path, &alg)?;
    let inputs = json!({ "pattern": path_str(pattern), "ideal": ideal, "addend": path_str(addend_path) });
    match addend::classify_addend(&alg, &k, &g) {
        Ok(desc) => {
            let l = g.sum(&ideals::to_subspace(&alg, &k)).map_err(bad("subspace"))?;
            let is_lie = lie::is_lie_ideal(&alg, &l).map_err(lie_err)?.is_none();
            let round_trip = desc.to_subspace(&alg) == l;
            let details = json!({
                "accepted": true,
                "descriptor": descriptor_json(&desc),
                "checks": { "sum_is_lie": is_lie, "descriptor_round_trip": round_trip },
            });
            Ok(Report::new("lie classify", inputs, is_lie && round_trip, details))
        }
        Err(LieError::Rejected(r)) => {
            // A rejected addend must indeed fail to give a Lie ideal.
            let l = g.sum(&ideals::to_subspace(&alg, &k)).map_err(bad("subspace"))?;
            let witness = lie::is_lie_ideal(&alg, &l).map_err(lie_err)?;
            let agrees = witness.is_some() || !g.is_subspace_of(&alg.diag_offdiag_split().0).unwrap_or(false);
            let details = json!({
                "accepted": false,
                "rejection": r.to_string(),
                "lie_witness": witness.as_ref().map(lie_witness_json),
            });
            Ok(Report::new("lie classify", inputs, agrees, details))
        }
        Err(e) => Err(lie_err(e)),
    }
}

pub fn lie_enumerate(caps: &Caps, pattern: &Path, ideal: &str, max_units: usize) -> Result<Report, InputError> {
    let alg = load_algebra(pattern, caps)?;
    let k = offdiag_ideal(&alg, ideal)?;
    let descs = addend::enumerate_descriptors(&alg, &k, max_units).map_err(lie_err)?;
    let mut ok = true;
    let mut seen = BTreeSet::new();
    let mut list = Vec::with_capacity(descs.len());
    for d in &descs {
        let s = d.to_subspace(&alg);
        ok &= lie::is_lie_ideal(&alg, &s).map_err(lie_err)?.is_none();
        ok &= seen.insert(serde_json::to_string(&s).expect("serializable"));
        let mut v = descriptor_json(d);
        v["dim"] = json!(s.dim());
        list.push(v);
    }
    let inputs = json!({ "pattern": path_str(pattern), "ideal": ideal, "max_units": max_units });
    Ok(Report::new("lie enumerate", inputs, ok, json!({ "count": descs.len(), "descriptors": list })))
}

pub fn sim_check(
    caps: &Caps,
    pattern: &Path,
    lie_path: &Path,
    trials: usize,
    seed: u64,
    probe: bool,
) -> Result<Report, InputError> {
    let alg = load_algebra(pattern, caps)?;
    let l = load_subspace(lie_path, &alg)?;
    let inputs = json!({
        "pattern": path_str(pattern),
        "lie": path_str(lie_path),
        "trials": trials,
        "seed": seed,
        "probe": probe,
    });
    let sim_err = |e: SimError| match e {
        SimError::Lie(le) => lie_err(le),
        other => input_err!("{other}"),
    };
    if probe {
        let r = similarity::probe_similarity(&alg, &l, trials, seed).map_err(sim_err)?;
        let mut details = to_value(&r);
        details["invariant"] = json!(r.invariant());
        return Ok(Report::new("sim check", inputs, true, details));
    }
    let r = similarity::check_similarity_invariance(&alg, &l, trials, seed).map_err(sim_err)?;
    Ok(Report::new("sim check", inputs, r.invariant(), to_value(&r)))
}

pub fn tower_run(
    caps: &Caps,
    tower_path: &Path,
    gens: Option<&Path>,
    seed: u64,
    sets: usize,
) -> Result<Report, InputError> {
    let spec: TowerSpec = load_json(tower_path)?;
    let dir = tower_path.parent().unwrap_or(Path::new("."));
    let tower = spec
        .build_with_cap(
            |rel| load_pattern(&dir.join(rel), caps).map_err(|e| e.to_string()),
            caps.max_n,
        )
        .map_err(bad(&path_str(tower_path)))?;
    let top = tower.top();
    let generator_sets = match gens {
        Some(p) => vec![load_matrices(p, top)?],
        None => {
            let mut rng = random::rng(seed);
            (0..sets).map(|_| corpus::generator_set(&mut rng, top)).collect()
        }
    };
    let mut ok = true;
    let mut reports = Vec::with_capacity(generator_sets.len());
    for g in &generator_sets {
        let r = lil_core::tower::theorem_lieform_check(&tower, g).map_err(bad("tower check"))?;
        ok &= r.passed();
        let mut v = to_value(&r);
        v["passed"] = json!(r.passed());
        reports.push(v);
    }
    let levels: Vec<Value> = tower.levels().iter().map(|a| to_value(&BlockSummary::from(a))).collect();
    let inputs = json!({
        "tower": path_str(tower_path),
        "gens": gens.map(path_str),
        "seed": seed,
        "sets": if gens.is_some() { 1 } else { sets },
        "max_n": caps.max_n,
    });
    Ok(Report::new("tower run", inputs, ok, json!({ "levels": levels, "checks": reports })))
}

pub fn nest_check(
    caps: &Caps,
    atoms: &[usize],
    samples: usize,
    seed: u64,
    csl: Option<&Path>,
) -> Result<Report, InputError> {
    let at = Atoms::new(atoms).map_err(bad("atoms"))?;
    if at.n() > caps.max_n {
        return Err(input_err!("atoms total {} exceeds the size cap {}", at.n(), caps.max_n));
    }
    let mask = csl.map(|p| load_pattern(p, caps)).transpose()?;
    let r = nest::run_checks(&at, samples, seed, mask.as_ref()).map_err(bad("nest"))?;
    let inputs = json!({ "atoms": atoms, "samples": samples, "seed": seed, "csl": csl.map(path_str) });
    Ok(Report::new("nest check", inputs, r.passed(), to_value(&r)))
}

pub fn suite(seed: u64, quick: bool) -> Result<Report, InputError> {
    let mut cfg = SuiteConfig::new(seed);
    if quick {
        cfg.random_per_size = 3;
        cfg.generator_sets = 3;
        cfg.invertibles = 5;
        cfg.non_lie_subspaces = 10;
        cfg.converse_trials = 50;
        cfg.nilpotents = 20;
        cfg.tower_pairs = 3;
        cfg.tower_generator_sets = 3;
        cfg.nest_matrices = 3;
        cfg.nest_samples = 20;
    }
    let criteria = suite::run_all(&cfg);
    for c in &criteria {
        eprintln!("{}", c.summary_line());
    }
    let r = suite::report(&cfg, criteria);
    let inputs = json!({ "seed": seed, "quick": quick, "config": cfg });
    Ok(Report::new("suite", inputs, r.passed, to_value(&r)))
}
