//! Randomized invariants over the public API: cuts nest, membership and cuts
//! agree, risk functions never fall in the level, closed forms match blind
//! quadrature, and score intervals contain every instantiation.

use std::collections::BTreeMap;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fuzzyfit_core::data::Example;
use fuzzyfit_core::fuzzy::{
    DiscreteFuzzyLabel, FuzzyDatum, Interval, Label, OutputSet, Trapezoid, NORMALIZATION_TOL,
};
use fuzzyfit_core::loss::{
    closed_form_fuzzy_l1, fuzzy_loss, BaseLoss, CrispLoss, LossConfig, MarginLoss,
};
use fuzzyfit_core::model::LinearModel;
use fuzzyfit_core::risk::{aggregated_risk, risk_function, Complexity, RiskConfig};

fn sorted4() -> impl Strategy<Value = (f64, f64, f64, f64)> {
    proptest::collection::vec(-20.0..20.0f64, 4).prop_map(|mut v| {
        v.sort_by(f64::total_cmp);
        (v[0], v[1], v[2], v[3])
    })
}

fn alpha() -> impl Strategy<Value = f64> {
    1e-6..=1.0f64
}

fn interval(range: f64) -> impl Strategy<Value = Interval> {
    (-range..range, 0.0..range / 4.0)
        .prop_map(|(mid, rad)| Interval::new(mid - rad, mid + rad).unwrap())
}

fn model(dim: usize) -> impl Strategy<Value = LinearModel> {
    (proptest::collection::vec(-3.0..3.0f64, dim), -3.0..3.0f64)
        .prop_map(|(w, b)| LinearModel::new(w, b))
}

/// A binary fuzzy label with degree 1 on one class; the other degree spans
/// crisp, discounted, and fully ambiguous observations.
fn binary_label() -> impl Strategy<Value = FuzzyDatum> {
    (proptest::bool::ANY, 0.0..=1.0f64).prop_map(|(positive, other)| {
        let (one, rest) = if positive {
            (Label::positive(), Label::negative())
        } else {
            (Label::negative(), Label::positive())
        };
        let mut m = BTreeMap::new();
        m.insert(one, 1.0);
        if other > 0.0 {
            m.insert(rest, other);
        }
        FuzzyDatum::FuzzyLabel(DiscreteFuzzyLabel::new(m).unwrap())
    })
}

fn real_datum() -> impl Strategy<Value = FuzzyDatum> {
    prop_oneof![
        (-20.0..20.0f64).prop_map(|v| FuzzyDatum::real(v).unwrap()),
        sorted4().prop_map(|(a, _, _, d)| FuzzyDatum::interval(a, d).unwrap()),
        sorted4().prop_map(|(a, b, c, d)| FuzzyDatum::trapezoid(a, b, c, d).unwrap()),
    ]
}

fn real_example(dim: usize) -> impl Strategy<Value = Example> {
    (proptest::collection::vec(interval(5.0), dim), real_datum())
        .prop_map(|(x, y)| Example::new(x, y))
}

fn label_example(dim: usize) -> impl Strategy<Value = Example> {
    (proptest::collection::vec(interval(5.0), dim), binary_label())
        .prop_map(|(x, y)| Example::new(x, y))
}

proptest! {
    #[test]
    fn trapezoid_cuts_nest((a, b, c, d) in sorted4(), lo in alpha(), hi in alpha()) {
        let t = Trapezoid::new(a, b, c, d).unwrap();
        let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
        let outer = t.alpha_cut(lo).unwrap();
        let inner = t.alpha_cut(hi).unwrap();
        prop_assert!(outer.contains_interval(&inner));
        // Extremes: every cut sits inside the support and contains the core.
        prop_assert!(t.support().contains_interval(&outer));
        prop_assert!(inner.contains_interval(&t.core()));
    }

    #[test]
    fn trapezoid_membership_matches_cuts(
        (a, b, c, d) in sorted4(),
        al in alpha(),
        t_pos in 0.0..=1.0f64,
    ) {
        let t = Trapezoid::new(a, b, c, d).unwrap();
        // Sweep a point across the support and a margin beyond it.
        let x = (a - 1.0) + t_pos * ((d + 1.0) - (a - 1.0));
        let cut = t.alpha_cut(al).unwrap();
        let mu = t.membership(x);
        let tol = 1e-9 * (1.0 + d.abs().max(a.abs()));
        if mu >= al + 1e-9 {
            prop_assert!(cut.contains(x) || Interval::new(cut.lo() - tol, cut.hi() + tol).unwrap().contains(x));
        }
        if cut.contains(x) {
            // Degenerate ramps make membership jump; a cut point still
            // carries at least the level up to the interpolation slack.
            prop_assert!(mu >= al - 1e-9 - tol * 2.0);
        }
    }

    #[test]
    fn label_cuts_nest_and_match_membership(
        degrees in proptest::collection::vec(0.0..=1.0f64, 3),
        lo in alpha(),
        hi in alpha(),
    ) {
        let names = ["+1", "-1", "other"];
        let mut m = BTreeMap::new();
        m.insert(Label::new(names[0]), 1.0);
        for (name, &degree) in names[1..].iter().zip(&degrees[1..]) {
            if degree > 0.0 {
                m.insert(Label::new(*name), degree);
            }
        }
        let l = DiscreteFuzzyLabel::new(m).unwrap();
        let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
        let outer = l.alpha_cut(lo).unwrap();
        let inner = l.alpha_cut(hi).unwrap();
        prop_assert!(inner.is_subset(&outer));
        prop_assert!(!inner.is_empty());
        // The cut is exactly the degree test, slack included.
        for name in names {
            let label = Label::new(name);
            let member = outer.contains(&label);
            prop_assert_eq!(member, l.membership(&label) >= lo - NORMALIZATION_TOL);
        }
    }

    #[test]
    fn datum_cuts_nest(y in prop_oneof![real_datum(), binary_label()], lo in alpha(), hi in alpha()) {
        let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
        match (y.alpha_cut(lo).unwrap(), y.alpha_cut(hi).unwrap()) {
            (OutputSet::Interval(outer), OutputSet::Interval(inner)) => {
                prop_assert!(outer.contains_interval(&inner));
            }
            (OutputSet::Labels(outer), OutputSet::Labels(inner)) => {
                prop_assert!(inner.is_subset(&outer));
            }
            _ => prop_assert!(false, "cut kind changed with the level"),
        }
    }

    #[test]
    fn closed_l1_matches_blind_quadrature((a, b, c, d) in sorted4(), yhat in -25.0..25.0f64) {
        let t = Trapezoid::new(a, b, c, d).unwrap();
        let closed = closed_form_fuzzy_l1(&t, yhat);
        // The integrand is piecewise linear in the level with two kinks, so
        // the midpoint rule is exact away from the kink cells; 20001 levels
        // push the kink error far below the tolerance.
        let cfg = LossConfig { levels: 20_001, closed_forms: false };
        let blind = fuzzy_loss(BaseLoss::L1, &FuzzyDatum::Trapezoid(t), yhat, &cfg).unwrap();
        prop_assert!((closed - blind).abs() <= 1e-6, "closed {closed} vs quadrature {blind}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn risk_function_never_decreases_base(
        data in proptest::collection::vec(real_example(2), 1..6),
        m in model(2),
        kind in prop_oneof![
            Just(CrispLoss::Base(BaseLoss::L1)),
            Just(CrispLoss::Base(BaseLoss::L2)),
            Just(CrispLoss::Base(BaseLoss::ZeroOne)),
        ],
    ) {
        let rf = risk_function(&RiskConfig::default(), &kind, &m, &data).unwrap();
        for pair in rf.values.windows(2) {
            prop_assert!(pair[1] >= pair[0] - 1e-12);
        }
        let agg = rf.aggregate();
        prop_assert!(agg >= rf.values[0] - 1e-12 && agg <= rf.values[rf.values.len() - 1] + 1e-12);
    }

    #[test]
    fn risk_function_never_decreases_margin(
        data in proptest::collection::vec(label_example(2), 1..6),
        m in model(2),
        kind in prop_oneof![
            Just(CrispLoss::Margin(MarginLoss::Hinge)),
            Just(CrispLoss::Margin(MarginLoss::Logistic)),
            Just(CrispLoss::Margin(MarginLoss::Exponential)),
        ],
    ) {
        let cfg = RiskConfig { lambda: 0.01, complexity: Complexity::SquaredNorm, ..Default::default() };
        let rf = risk_function(&cfg, &kind, &m, &data).unwrap();
        for pair in rf.values.windows(2) {
            prop_assert!(pair[1] >= pair[0] - 1e-12);
        }
    }

    #[test]
    fn aggregate_equals_mean_fuzzy_loss(
        data in proptest::collection::vec(real_example(2), 1..5),
        m in model(2),
    ) {
        // Shared grid, no closed forms on the loss side: the level integral
        // and the example mean commute up to reassociation.
        let precise: Vec<Example> = data
            .iter()
            .map(|e| Example::new(e.x_mid().iter().map(|&v| Interval::degenerate(v).unwrap()).collect(), e.y.clone()))
            .collect();
        let agg = aggregated_risk(&RiskConfig::default(), &CrispLoss::Base(BaseLoss::L1), &m, &precise).unwrap();
        let cfg = LossConfig { closed_forms: false, ..Default::default() };
        let mut mean = 0.0;
        for e in &precise {
            let s = m.predict(&e.x_mid()).unwrap();
            mean += fuzzy_loss(BaseLoss::L1, &e.y, s, &cfg).unwrap();
        }
        mean /= precise.len() as f64;
        prop_assert!((agg - mean).abs() <= 1e-9, "aggregated {agg} vs mean {mean}");
    }
}

#[test]
fn score_interval_contains_every_instantiation() {
    // 10^4 random (model, box, point-in-box) triples; the score interval of
    // the box must contain the score of the point, and its endpoints must be
    // attained by box points.
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for _ in 0..10_000 {
        let dim = rng.random_range(1..=4);
        let weights: Vec<f64> = (0..dim).map(|_| rng.random_range(-4.0..4.0)).collect();
        let m = LinearModel::new(weights, rng.random_range(-4.0..4.0));
        let x: Vec<Interval> = (0..dim)
            .map(|_| {
                let mid = rng.random_range(-5.0..5.0);
                let rad = rng.random_range(0.0..2.0);
                Interval::new(mid - rad, mid + rad).unwrap()
            })
            .collect();
        let range = m.predict_interval(&x).unwrap();
        let point: Vec<f64> =
            x.iter().map(|iv| rng.random_range(iv.lo()..=iv.hi())).collect();
        let s = m.predict(&point).unwrap();
        let tol = 1e-9 * (1.0 + s.abs());
        assert!(range.lo() - tol <= s && s <= range.hi() + tol, "{s} outside {range:?}");
        for target in [range.lo(), range.hi(), range.mid()] {
            let attaining = m.input_attaining(&x, target).unwrap();
            for (v, iv) in attaining.iter().zip(&x) {
                assert!(iv.lo() - 1e-12 <= *v && *v <= iv.hi() + 1e-12);
            }
            let hit = m.predict(&attaining).unwrap();
            assert!((hit - target).abs() <= 1e-9 * (1.0 + target.abs()));
        }
    }
}
