use simquery_web::{bound, component_race, half_circles};

#[test]
fn full_budget_separates_half_circles() {
    let demo = half_circles(40, 0.05, 1.0, "uniform", 1).unwrap();
    assert_eq!(demo.points.len(), 80);
    assert_eq!(demo.budget, demo.total_pairs);
    assert_eq!(demo.purity, 1.0);
}

#[test]
fn unknown_scheme_is_an_error() {
    assert!(half_circles(10, 0.05, 0.5, "nope", 0).is_err());
}

#[test]
fn race_ends_at_two_components() {
    let curves = component_race(8, 3).unwrap();
    assert_eq!(curves.len(), 3);
    for c in &curves {
        assert_eq!(*c.components.last().unwrap(), 2);
        assert!(c.components.windows(2).all(|w| w[1] <= w[0]));
    }
}

#[test]
fn bound_matches_closed_form() {
    let b = bound("theorem2", 20, 0.0, 0.5, 1.0, 0.0, 0.0, 0.0, 0, 0.0).unwrap();
    assert_eq!(b.value, 95.0);
    assert!(bound("theorem4", 30, 0.0, 0.1, 4.0, 1.0, 0.0, 0.0, 3, 0.0).is_err());
}
