//! End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
//! exits non-zero when any criterion fails.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rand::Rng;

use omega_imc::abstraction::{build_imc, optimal_shifts, Density, SystemModel, Triangular, TruncatedGaussian};
use omega_imc::components::{find_components, union_mask};
use omega_imc::geometry::{align_partition_to_labels, uncertain_volume, Class, LabeledRegion, Partition, PropSet};
use omega_imc::imc::{Entry, InducedMc, IntervalMatrix};
use omega_imc::oracles::{
    acceptance_probability, qualitative_truth, quadrature_mass, quantitative_truth, random_dra, random_lattice_imc,
    random_point_imc, rng, sample_disturbance, sample_point, OracleError,
};
use omega_imc::product::{build_product, PairLabels, ProductImc};
use omega_imc::refinement::{refine_loop, Outcome};
use omega_imc::verifier::{verify_product, Comparison, SolverOptions, Spec};
use omega_imc_cli::{run, Cli, RunConfig};

type Verdict = Result<String, String>;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {:.1}s, limit {}s", t.as_secs_f64(), limit.as_secs()))
}

// 1. Closed-form shifts against a grid search over quadrature values.

fn shift_family(family: &str, seed: u64) -> Result<(usize, usize), String> {
    let mut r = rng(seed);
    let mut literal_failures = 0;
    let mut below_mid = 0;
    for t in 0..100 {
        let c: f64 = r.random_range(-1.0..1.0);
        let h: f64 = r.random_range(0.05..1.0);
        let dist: Box<dyn Density> = match family {
            "truncated-gaussian" => {
                let k: f64 = r.random_range(0.5..3.0);
                Box::new(TruncatedGaussian::new(c, h * h, c - k * h, c + k * h).unwrap())
            }
            _ => Box::new(Triangular::new(c, h).unwrap()),
        };
        let a: f64 = r.random_range(-2.0..2.0);
        let b = a + r.random_range(0.05..1.5);
        let s_center = 0.5 * (a + b) - c;
        let r_lo = s_center + r.random_range(-1.5..1.0);
        let r_hi = r_lo + r.random_range(0.01..1.5);
        let mass = |s: f64| quadrature_mass(dist.as_ref(), a, b, s).map_err(|e| e.to_string());
        let steps = ((r_hi - r_lo) / 1e-3).floor() as usize;
        let mut grid_max = f64::NEG_INFINITY;
        let mut grid_min = f64::INFINITY;
        for k in 0..=steps + 1 {
            let s = if k > steps { r_hi } else { r_lo + k as f64 * 1e-3 };
            let v = mass(s.min(r_hi))?;
            grid_max = grid_max.max(v);
            grid_min = grid_min.min(v);
        }
        let (s_max, s_min) = optimal_shifts(s_center, r_lo, r_hi);
        let (v_max, v_min) = (mass(s_max)?, mass(s_min)?);
        ensure(v_max >= grid_max - 1e-6, || {
            format!("{family} tuple {t}: maximizer gives {v_max}, grid finds {grid_max}")
        })?;
        ensure(v_min <= grid_min + 1e-6, || {
            format!("{family} tuple {t}: minimizer gives {v_min}, grid finds {grid_min}")
        })?;
        let mid = 0.5 * (r_lo + r_hi);
        if s_center < mid {
            below_mid += 1;
            if mass(r_lo)? > grid_min + 1e-6 {
                literal_failures += 1;
            }
        }
    }
    Ok((literal_failures, below_mid))
}

fn shift_optimality() -> Verdict {
    let start = Instant::now();
    let mut notes = Vec::new();
    let mut literal_total = 0;
    for (i, family) in ["truncated-gaussian", "triangular"].into_iter().enumerate() {
        let (fails, below) = shift_family(family, 100 + i as u64)?;
        literal_total += fails;
        notes.push(format!("{family}: 100 tuples ok, literal case table wrong on {fails}/{below}"));
    }
    ensure(literal_total > 0, || "literal case table never distinguished".into())?;
    within(start, Duration::from_secs(60))?;
    Ok(format!("{} ({:.1}s)", notes.join("; "), start.elapsed().as_secs_f64()))
}

// 2. Monte Carlo frequencies inside the abstraction's intervals.

fn grid_partition(model: &SystemModel, grid: &[usize]) -> Partition {
    let whole = LabeledRegion {
        rect: model.domain().clone(),
        props: PropSet::new(),
    };
    align_partition_to_labels(model.domain(), &[whole], grid).unwrap()
}

fn abstraction_soundness() -> Verdict {
    const N: usize = 10_000;
    let start = Instant::now();
    let model = SystemModel::bistable_reference();
    let partition = grid_partition(&model, &[8, 8]);
    let imc = build_imc(&model, &partition).map_err(|e| e.to_string())?;
    let mut r = rng(2);
    let mut worst: f64 = f64::INFINITY;
    for pair in 0..50 {
        let j = r.random_range(0..partition.len());
        let row: &[Entry] = imc.matrix().row(j);
        let e = row[r.random_range(0..row.len())];
        let target = partition.cell(e.col);
        for _ in 0..20 {
            let x = sample_point(partition.cell(j), &mut r);
            let mut hits = 0usize;
            for _ in 0..N {
                let w = sample_disturbance(&model, &mut r);
                let y = model.step(&x, &w);
                ensure(row.iter().any(|f| partition.cell(f.col).contains_point(&y)), || {
                    format!("pair {pair}: sample from cell {j} lands outside the row support at {y:?}")
                })?;
                if target.contains_point(&y) {
                    hits += 1;
                }
            }
            let freq = hits as f64 / N as f64;
            let sd = |p: f64| (p * (1.0 - p) / N as f64).sqrt();
            let lo_slack = freq - (e.lo - 4.0 * sd(e.lo));
            let hi_slack = e.hi + 4.0 * sd(e.hi) - freq;
            worst = worst.min(lo_slack).min(hi_slack);
            ensure(lo_slack >= 0.0 && hi_slack >= 0.0, || {
                format!(
                    "pair ({j},{}) at {x:?}: frequency {freq} outside [{}, {}] with 4 sigma",
                    e.col, e.lo, e.hi
                )
            })?;
        }
    }
    within(start, Duration::from_secs(180))?;
    Ok(format!(
        "1000 points x 1e4 samples inside bounds, min slack {worst:.4} ({:.1}s)",
        start.elapsed().as_secs_f64()
    ))
}

// 3. Components and bounds against exhaustive enumeration.

fn oracle_instance(seed: u64) -> ProductImc {
    let mut r = rng(seed);
    let n = r.random_range(1..=5);
    let k = r.random_range(1..=3);
    let imc = random_lattice_imc(&mut r, n, 5, &["a"]);
    let dra = random_dra(&mut r, k);
    build_product(&imc, &dra).unwrap()
}

fn oracle_equivalence() -> Verdict {
    const LIMIT: usize = 20_000;
    let start = Instant::now();
    let spec = Spec::new(Comparison::Ge, 0.5);
    let (mut checked, mut skipped, mut seed) = (0, 0, 10_000u64);
    let mut chains = 0usize;
    while checked < 200 {
        seed += 1;
        let p = oracle_instance(seed);
        let (truth, quant) = match (qualitative_truth(&p, LIMIT), quantitative_truth(&p, LIMIT)) {
            (Ok(t), Ok(q)) => (t, q),
            (Err(OracleError::TooLarge { .. }), _) | (_, Err(OracleError::TooLarge { .. })) => {
                skipped += 1;
                continue;
            }
            (Err(e), _) | (_, Err(e)) => return Err(format!("seed {seed}: oracle failed: {e}")),
        };
        checked += 1;
        chains += quant.chains;
        let c = find_components(&p);
        let n = p.n_states();
        for b in &c.bsccs {
            ensure(truth.bsccs.contains(&(b.states.clone(), b.accepting)), || {
                format!("seed {seed}: {b:?} is not a bottom component of any chain")
            })?;
            ensure(b.permanent == truth.is_permanent(&p, &b.states, b.accepting), || {
                format!("seed {seed}: permanence of {b:?}")
            })?;
        }
        let acc: Vec<_> = c.bsccs.iter().filter(|b| b.accepting).collect();
        let non: Vec<_> = c.bsccs.iter().filter(|b| !b.accepting).collect();
        ensure(union_mask(n, &acc) == truth.accepting_union, || format!("seed {seed}: accepting union"))?;
        ensure(union_mask(n, &non) == truth.rejecting_union, || format!("seed {seed}: rejecting union"))?;
        ensure(c.wc_largest() == truth.wc_largest, || format!("seed {seed}: largest winning"))?;
        ensure(c.lc_largest() == truth.lc_largest, || format!("seed {seed}: largest losing"))?;
        ensure(c.wc_permanent == truth.wc_permanent, || format!("seed {seed}: permanent winning"))?;
        ensure(c.lc_permanent == truth.lc_permanent, || format!("seed {seed}: permanent losing"))?;
        let res = verify_product(p.clone(), &spec, &SolverOptions::default()).map_err(|e| e.to_string())?;
        for (j, &q) in p.initial_states().iter().enumerate() {
            ensure((res.p_min[j] - quant.min_accept[q]).abs() < 1e-6, || {
                format!("seed {seed}: p_min {} vs {}", res.p_min[j], quant.min_accept[q])
            })?;
            ensure((res.p_max[j] - quant.max_accept[q]).abs() < 1e-6, || {
                format!("seed {seed}: p_max {} vs {}", res.p_max[j], quant.max_accept[q])
            })?;
        }
        ensure(quant.normalization_error < 1e-9, || {
            format!("seed {seed}: normalization error {}", quant.normalization_error)
        })?;
    }
    within(start, Duration::from_secs(300))?;
    Ok(format!(
        "200 instances, {chains} vertex chains, {skipped} oversized instances resampled ({:.1}s)",
        start.elapsed().as_secs_f64()
    ))
}

// 4. Point-valued intervals reduce to ordinary chain checking.

fn degenerate_reduction() -> Verdict {
    let spec = Spec::new(Comparison::Ge, 0.5);
    let opts = SolverOptions {
        tol: 1e-13,
        max_iters: 10_000_000,
    };
    let mut worst: f64 = 0.0;
    for seed in 0..50 {
        let mut r = rng(20_000 + seed);
        let n = r.random_range(2..=12);
        let k = r.random_range(1..=3);
        let imc = random_point_imc(&mut r, n, 4, &["a"]);
        let dra = random_dra(&mut r, k);
        let p = build_product(&imc, &dra).map_err(|e| e.to_string())?;
        let mc = InducedMc::new(
            p.matrix()
                .rows()
                .iter()
                .map(|row| row.iter().map(|e| (e.col, e.lo)).collect())
                .collect(),
        );
        let exact = acceptance_probability(&mc, p.pairs()).map_err(|e| e.to_string())?;
        let res = verify_product(p.clone(), &spec, &opts).map_err(|e| e.to_string())?;
        for (j, &q) in p.initial_states().iter().enumerate() {
            let d = (res.p_min[j] - res.p_max[j])
                .abs()
                .max((res.p_min[j] - exact[q]).abs())
                .max((res.p_max[j] - exact[q]).abs());
            worst = worst.max(d);
            ensure(d <= 1e-9, || {
                format!(
                    "seed {seed}, cell {j}: [{}, {}] vs exact {}",
                    res.p_min[j], res.p_max[j], exact[q]
                )
            })?;
        }
    }
    Ok(format!("50 chains, max deviation {worst:.2e}"))
}

// 5. The three-state structure with two distinct induced chains.

fn three_state_structure() -> Verdict {
    let e = |col, lo, hi| Entry { col, lo, hi };
    let m = IntervalMatrix::new(vec![
        vec![e(1, 1.0, 1.0)],
        vec![e(0, 0.0, 1.0), e(2, 0.0, 1.0)],
        vec![e(0, 0.0, 1.0), e(2, 0.0, 1.0)],
    ])
    .map_err(|e| e.to_string())?;
    let pair = PairLabels {
        fin: vec![false, false, true],
        inf: vec![true, false, false],
    };
    let p = ProductImc::from_parts(m, vec![(0, 0), (1, 0), (2, 0)], vec![pair], vec![0, 1, 2])
        .map_err(|e| e.to_string())?;
    let c = find_components(&p);
    let find = |s: &[usize]| c.bsccs.iter().find(|b| b.states == s);
    let acc = find(&[0, 1]).ok_or("{Q0,Q1} not reported")?;
    let non = find(&[2]).ok_or("{Q2} not reported")?;
    ensure(acc.accepting && !acc.permanent, || format!("{{Q0,Q1}} reported as {acc:?}"))?;
    ensure(!non.accepting && !non.permanent, || format!("{{Q2}} reported as {non:?}"))?;
    let all: Vec<String> = c
        .bsccs
        .iter()
        .map(|b| format!("{:?}{}", b.states, if b.accepting { "+" } else { "-" }))
        .collect();
    Ok(format!(
        "{{Q0,Q1}} potential accepting, {{Q2}} potential non-accepting, neither permanent; reported {}",
        all.join(" ")
    ))
}

// 6. Desk-scale refinement of the toggle switch.

fn locate(partition: &Partition, x: &[f64]) -> usize {
    partition
        .cells()
        .iter()
        .position(|c| c.contains_point(x))
        .expect("partition covers the domain")
}

fn desk_refinement() -> Verdict {
    let start = Instant::now();
    let cfg = RunConfig::load(&fixtures().join("bistable_phi1.json")).map_err(|e| e.to_string())?;
    let rc = cfg.refinement.loop_config();
    ensure(
        rc.theta == 0.1 && rc.p_stop == 1e-4 && rc.v_stop == 0.35 && rc.max_cells == 1500,
        || format!("fixture settings differ: {rc:?}"),
    )?;
    let model = cfg.build_model().map_err(|e| e.to_string())?;
    let initial = cfg.build_partition().map_err(|e| e.to_string())?;
    let dra = cfg.load_dra().map_err(|e| e.to_string())?;
    let scorer = cfg.scorer().map_err(|e| e.to_string())?;
    let mut r = rng(6);
    let probes: Vec<Vec<f64>> = (0..4000).map(|_| sample_point(model.domain(), &mut r)).collect();
    let mut seen: Vec<(bool, bool)> = vec![(false, false); probes.len()];
    let run = refine_loop(
        &model,
        initial.clone(),
        &dra,
        &cfg.spec(),
        &rc,
        &cfg.solver(),
        scorer.as_ref(),
        |view| {
            for (x, s) in probes.iter().zip(seen.iter_mut()) {
                match view.result.classes[locate(view.partition, x)] {
                    Class::Yes => s.0 = true,
                    Class::No => s.1 = true,
                    Class::Undecided => {}
                }
            }
        },
    )
    .map_err(|e| e.to_string())?;
    let v = uncertain_volume(&run.partition, &run.result.classes).map_err(|e| e.to_string())?;
    ensure(run.outcome == Outcome::Converged && v <= 0.35, || {
        format!("ended {} with uncertain volume {v}", run.outcome)
    })?;
    let flipped = seen.iter().filter(|s| s.0 && s.1).count();
    ensure(flipped == 0 && run.total_flips() == 0, || {
        format!("{flipped} probe points and {} cells flipped", run.total_flips())
    })?;
    let unsplit = initial.cells().iter().filter(|c| run.partition.cells().contains(c)).count();
    ensure(unsplit > 0, || "every initial cell was split".into())?;
    within(start, Duration::from_secs(1800))?;
    Ok(format!(
        "{} rounds, {} cells, uncertain volume {v:.4}, {unsplit} initial cells unsplit, no flips ({:.1}s)",
        run.rounds.len() - 1,
        run.partition.len(),
        start.elapsed().as_secs_f64()
    ))
}

// 7. Byte-identical outputs across thread counts.

fn csv_files(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    for e in std::fs::read_dir(dir).unwrap() {
        let p = e.unwrap().path();
        if p.extension().is_some_and(|x| x == "csv") {
            out.insert(p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap());
        }
    }
    out
}

fn determinism() -> Verdict {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let config = fixtures().join("bistable_phi1.json");
    let mut total = 0;
    for (name, args) in [
        ("verify", vec!["verify"]),
        ("refine", vec!["refine"]),
        ("simulate", vec!["simulate", "--x0", "3.5,3.5", "--horizon", "40", "--n-traj", "20"]),
    ] {
        let mut outputs = Vec::new();
        for threads in [1, 4, 1] {
            let dir = tmp.path().join(format!("{name}-{threads}-{}", outputs.len()));
            let mut argv = vec!["omega-imc".to_string(), "--config".into(), config.display().to_string()];
            argv.extend(["--out-dir".into(), dir.display().to_string()]);
            argv.extend(["--threads".into(), threads.to_string(), "--seed".into(), "11".into()]);
            argv.extend(args.iter().map(|s| s.to_string()));
            let cli = <Cli as clap::Parser>::try_parse_from(&argv).map_err(|e| e.to_string())?;
            run(&cli).map_err(|e| format!("{name}: {e}"))?;
            outputs.push(csv_files(&dir));
        }
        ensure(!outputs[0].is_empty(), || format!("{name}: no CSV written"))?;
        ensure(outputs.iter().all(|o| *o == outputs[0]), || {
            format!("{name}: CSV outputs differ between runs")
        })?;
        total += outputs[0].len();
    }
    Ok(format!("{total} CSV files identical across 1/4/1 threads"))
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 7] = [
        ("shift optimality", shift_optimality),
        ("abstraction soundness", abstraction_soundness),
        ("oracle equivalence", oracle_equivalence),
        ("degenerate reduction", degenerate_reduction),
        ("three-state structure", three_state_structure),
        ("desk-scale refinement", desk_refinement),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let verdict = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match verdict {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {detail}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
