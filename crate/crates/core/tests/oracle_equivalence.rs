use omega_imc::components::{find_components, union_mask};
use omega_imc::oracles::{
    qualitative_truth, quantitative_truth, random_dra, random_lattice_imc, rng, OracleError,
};
use omega_imc::product::{build_product, ProductImc};
use omega_imc::verifier::{verify_product, Comparison, SolverOptions, Spec};
use rand::Rng;

const LIMIT: usize = 20_000;

fn instance(seed: u64) -> ProductImc {
    let mut r = rng(seed);
    let n = r.random_range(1..=5);
    let k = r.random_range(1..=3);
    let imc = random_lattice_imc(&mut r, n, 5, &["a"]);
    let dra = random_dra(&mut r, k);
    build_product(&imc, &dra).unwrap()
}

#[test]
fn components_and_bounds_match_enumeration() {
    let mut checked = 0;
    let mut seed = 0;
    while checked < 100 {
        seed += 1;
        let p = instance(seed);
        let truth = match qualitative_truth(&p, LIMIT) {
            Ok(t) => t,
            Err(OracleError::TooLarge { .. }) => continue,
            Err(e) => panic!("{e}"),
        };
        let quant = match quantitative_truth(&p, LIMIT) {
            Ok(t) => t,
            Err(OracleError::TooLarge { .. }) => continue,
            Err(e) => panic!("{e}"),
        };
        checked += 1;
        let c = find_components(&p);
        let n = p.n_states();
        for b in &c.bsccs {
            assert!(
                truth.bsccs.contains(&(b.states.clone(), b.accepting)),
                "seed {seed}: {b:?} is not a bottom component of any chain"
            );
            assert_eq!(
                b.permanent,
                truth.is_permanent(&p, &b.states, b.accepting),
                "seed {seed}: permanence of {b:?}"
            );
        }
        let acc: Vec<_> = c.bsccs.iter().filter(|b| b.accepting).collect();
        let non: Vec<_> = c.bsccs.iter().filter(|b| !b.accepting).collect();
        assert_eq!(union_mask(n, &acc), truth.accepting_union, "seed {seed}");
        assert_eq!(union_mask(n, &non), truth.rejecting_union, "seed {seed}");
        assert_eq!(c.wc_largest(), truth.wc_largest, "seed {seed}: wc_largest");
        assert_eq!(c.lc_largest(), truth.lc_largest, "seed {seed}: lc_largest");
        assert_eq!(c.wc_permanent, truth.wc_permanent, "seed {seed}: wc_permanent");
        assert_eq!(c.lc_permanent, truth.lc_permanent, "seed {seed}: lc_permanent");

        let spec = Spec::new(Comparison::Ge, 0.5);
        let r = verify_product(p.clone(), &spec, &SolverOptions::default()).unwrap();
        for (j, &q) in p.initial_states().iter().enumerate() {
            assert!(
                (r.p_min[j] - quant.min_accept[q]).abs() < 1e-6,
                "seed {seed}: p_min {} vs {}",
                r.p_min[j],
                quant.min_accept[q]
            );
            assert!(
                (r.p_max[j] - quant.max_accept[q]).abs() < 1e-6,
                "seed {seed}: p_max {} vs {}",
                r.p_max[j],
                quant.max_accept[q]
            );
        }
        assert!(quant.normalization_error < 1e-9);
    }
}
