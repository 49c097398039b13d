//! Property tests for structural invariants.

use proptest::prelude::*;

use gnk_core::graphgen::{GraphMeta, TypedGraph, Variant};
use gnk_core::graphstats::{degree_histogram, two_core};
use gnk_core::kernels::{discretize, discretize_capped, DiscretizeMode, Irreducibility, Kernel};
use gnk_core::spaces::{GridScale, TypeSpace};

fn meta() -> GraphMeta {
    GraphMeta {
        kernel: String::from("prop"),
        variant: Variant::Min,
        tier: String::from("manual"),
        seed: 0,
        exact_points: false,
    }
}

fn arb_kernel() -> impl Strategy<Value = Kernel> {
    prop_oneof![
        (0.0f64..5.0).prop_map(|c| Kernel::constant(c).unwrap()),
        (1.5f64..6.0, 0.2f64..2.0).prop_map(|(p, a)| Kernel::rank1(p, a).unwrap()),
        (0.1f64..3.0).prop_map(|c| Kernel::dubins(c).unwrap()),
        (0.01f64..0.5).prop_map(|d| Kernel::chkns(d).unwrap()),
        (0.1f64..2.0, 0.2f64..3.0).prop_map(|(l, d)| Kernel::turova(l, d).unwrap()),
        Just(Kernel::half_triangle()),
        (0.1f64..3.0, 0.05f64..0.5).prop_map(|(c, w)| Kernel::window(c, w).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kernel_eval_symmetric_and_nonnegative(
        kernel in arb_kernel(),
        x in 1e-6f64..1.0,
        y in 1e-6f64..1.0,
    ) {
        let a = kernel.eval(x, y);
        let b = kernel.eval(y, x);
        prop_assert!(a >= 0.0);
        prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
    }

    #[test]
    fn variant_maps_are_ordered(x in 0.0f64..50.0) {
        // odds <= poisson <= min, all in [0, 1]
        let min = Variant::Min.probability(x);
        let poi = Variant::Poisson.probability(x);
        let odds = Variant::Odds.probability(x);
        prop_assert!(odds <= poi + 1e-15);
        prop_assert!(poi <= min + 1e-15);
        prop_assert!((0.0..=1.0).contains(&min));
        prop_assert!((0.0..=1.0).contains(&poi));
        prop_assert!((0.0..=1.0).contains(&odds));
    }

    #[test]
    fn discretization_modes_bracket_and_scale(
        kernel in arb_kernel(),
        m in 2usize..24,
        s in 0.1f64..4.0,
    ) {
        let space = TypeSpace::interval(m, GridScale::Uniform, 0.0).unwrap();
        let lo = discretize(&kernel, &space, DiscretizeMode::Lower).unwrap();
        let mid = discretize(&kernel, &space, DiscretizeMode::Midpoint).unwrap();
        let hi = discretize_capped(&kernel, &space, DiscretizeMode::Upper, Some(f64::MAX / 4.0)).unwrap();
        for i in 0..lo.k.len() {
            prop_assert!(lo.k[i] <= mid.k[i] + 1e-12, "lower above midpoint at {i}");
            prop_assert!(mid.k[i] <= hi.k[i] + 1e-12, "midpoint above upper at {i}");
            // symmetry is exact
            let (r, c) = (i / m, i % m);
            prop_assert!(mid.k[i] == mid.k[c * m + r]);
        }
        // scaling linearity, exact in floating point up to one multiply
        let scaled = discretize(&kernel.clone().scaled(s), &space, DiscretizeMode::Midpoint).unwrap();
        for i in 0..mid.k.len() {
            prop_assert!((scaled.k[i] - s * mid.k[i]).abs() <= 1e-12 * (1.0 + scaled.k[i].abs()));
        }
    }

    #[test]
    fn lower_mode_is_nondecreasing_under_refinement(
        kernel in arb_kernel(),
        m in 2usize..16,
        xs in proptest::collection::vec((1e-6f64..1.0, 1e-6f64..1.0), 50),
    ) {
        // nested uniform grids m and 2m: the lower step function grows
        let coarse_space = TypeSpace::interval(m, GridScale::Uniform, 0.0).unwrap();
        let fine_space = TypeSpace::interval(2 * m, GridScale::Uniform, 0.0).unwrap();
        let coarse = discretize(&kernel, &coarse_space, DiscretizeMode::Lower).unwrap();
        let fine = discretize(&kernel, &fine_space, DiscretizeMode::Lower).unwrap();
        for (x, y) in xs {
            let vc = coarse.entry(coarse_space.cell_of(x), coarse_space.cell_of(y));
            let vf = fine.entry(fine_space.cell_of(x), fine_space.cell_of(y));
            prop_assert!(vc <= vf + 1e-12, "lower mode decreased under refinement at ({x},{y})");
        }
    }

    #[test]
    fn irreducibility_invariant_under_permutation(
        perm_seed in 0u64..1000,
    ) {
        // fixed 4-type reducible kernel, randomly permuted
        let base = vec![
            1.0, 2.0, 0.0, 0.0,
            2.0, 0.0, 0.0, 0.0,
            0.0, 0.0, 3.0, 1.0,
            0.0, 0.0, 1.0, 0.0,
        ];
        let w = [0.1, 0.2, 0.3, 0.4];
        let mut perm = [0usize, 1, 2, 3];
        // cheap deterministic shuffle
        let mut state = perm_seed;
        for i in (1..4).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            let j = (state >> 33) as usize % (i + 1);
            perm.swap(i, j);
        }
        let mut pk = vec![0.0; 16];
        let mut pw = [0.0; 4];
        for i in 0..4 {
            pw[i] = w[perm[i]];
            for j in 0..4 {
                pk[i * 4 + j] = base[perm[i] * 4 + perm[j]];
            }
        }
        let s0 = TypeSpace::finite(&w).unwrap();
        let s1 = TypeSpace::finite(&pw).unwrap();
        let dk0 = discretize(&Kernel::finite_matrix(base, 4).unwrap(), &s0, DiscretizeMode::Midpoint).unwrap();
        let dk1 = discretize(&Kernel::finite_matrix(pk, 4).unwrap(), &s1, DiscretizeMode::Midpoint).unwrap();
        let class = |irr: Irreducibility| match irr {
            Irreducibility::Irreducible => (0usize, vec![]),
            Irreducibility::QuasiIrreducible { support } => (1, vec![support.len()]),
            Irreducibility::Reducible { classes } => {
                let mut sizes: Vec<usize> = classes.iter().map(|c| c.len()).collect();
                sizes.sort_unstable();
                (2, sizes)
            }
        };
        prop_assert_eq!(class(dk0.irreducibility()), class(dk1.irreducibility()));
    }

    #[test]
    fn two_core_idempotent_and_handshake(
        n in 3usize..40,
        edges in proptest::collection::vec((0u32..40, 0u32..40), 0..80),
    ) {
        let edges: Vec<(u32, u32)> = edges
            .into_iter()
            .filter(|&(u, v)| (u as usize) < n && (v as usize) < n && u != v)
            .collect();
        let g = TypedGraph::from_edges(n, vec![0; n], edges, meta());
        // handshake
        let h = degree_histogram(&g);
        let degsum: usize = h.iter().map(|(k, z)| k * z).sum();
        prop_assert_eq!(degsum, 2 * g.edge_count());
        // two-core idempotence and minimum degree
        let tc = two_core(&g);
        for v in 0..tc.graph.n {
            prop_assert!(tc.graph.degree(v) >= 2);
        }
        let tc2 = two_core(&tc.graph);
        prop_assert_eq!(tc2.graph.n, tc.graph.n);
        prop_assert_eq!(tc2.graph.edge_count(), tc.graph.edge_count());
    }
}

/// Deterministic large-sample nestedness check: the lower approximation of
/// the Dubins kernel on nested grids is pointwise nondecreasing at 10^4
/// sampled points.
#[test]
fn dubins_lower_nestedness_large_sample() {
    use gnk_core::rng::Prng;
    let kernel = Kernel::dubins(1.0).unwrap();
    let coarse_space = TypeSpace::interval(16, GridScale::Uniform, 0.0).unwrap();
    let fine_space = TypeSpace::interval(32, GridScale::Uniform, 0.0).unwrap();
    let coarse = discretize(&kernel, &coarse_space, DiscretizeMode::Lower).unwrap();
    let fine = discretize(&kernel, &fine_space, DiscretizeMode::Lower).unwrap();
    let mut rng = Prng::new(4242);
    for _ in 0..10_000 {
        let x = rng.uniform_open();
        let y = rng.uniform_open();
        let vc = coarse.entry(coarse_space.cell_of(x), coarse_space.cell_of(y));
        let vf = fine.entry(fine_space.cell_of(x), fine_space.cell_of(y));
        assert!(vc <= vf + 1e-12, "({x},{y}): coarse {vc} > fine {vf}");
    }
}

/// Lower-mode edge densities are nondecreasing over five nested refinement
/// levels and bracketed by midpoint and (capped) upper densities.
#[test]
fn monotone_density_over_refinements() {
    for kernel in [
        Kernel::half_triangle(),
        Kernel::dubins(1.0).unwrap(),
        Kernel::chkns(0.5).unwrap(),
        Kernel::turova(1.0, 2.0).unwrap(),
        Kernel::rank1(3.0, 1.0).unwrap(),
    ] {
        let mut prev_lower = 0.0f64;
        for level in 0..5 {
            let m = 8 << level;
            let space = TypeSpace::interval(m, GridScale::Uniform, 0.0).unwrap();
            let lower = discretize(&kernel, &space, DiscretizeMode::Lower)
                .unwrap()
                .mean_edge_density();
            let mid = discretize(&kernel, &space, DiscretizeMode::Midpoint)
                .unwrap()
                .mean_edge_density();
            let upper = discretize_capped(&kernel, &space, DiscretizeMode::Upper, Some(1e9))
                .unwrap()
                .mean_edge_density();
            assert!(lower + 1e-12 >= prev_lower, "lower density fell at level {level}");
            assert!(lower <= mid + 1e-12 && mid <= upper + 1e-12);
            prev_lower = lower;
        }
    }
}

/// Lower-mode Dubins densities approach the exact half-integral c = 1 from
/// below: nondecreasing along nested refinements (m -> 2m - 1 keeps the
/// geometric breakpoints nested at fixed depth) and close to the limit on
/// the deepest fine grid.
#[test]
fn dubins_density_approaches_from_below() {
    let kernel = Kernel::dubins(1.0).unwrap();
    let mut prev = 0.0f64;
    let mut m = 51usize;
    for _ in 0..4 {
        let space = TypeSpace::interval(m, GridScale::Logarithmic, 30.0).unwrap();
        let d = discretize(&kernel, &space, DiscretizeMode::Lower)
            .unwrap()
            .mean_edge_density();
        assert!(d < 1.0, "lower density must stay below the limit, got {d}");
        assert!(
            d >= prev,
            "density not nondecreasing under nested refinement: {d} after {prev}"
        );
        prev = d;
        m = 2 * m - 1;
    }
    assert!(
        prev > 0.95,
        "deep fine grid should be within 5% of the limit, got {prev}"
    );
}
