mod common;

#[test]
fn initial_forms_factor_and_critical_points_are_bounded() {
    common::initial_form_sweep(11, 40, 6).unwrap();
}

#[test]
fn polygons_are_invariant_above_the_height() {
    assert_eq!(common::polygon_invariance(12, 40).unwrap(), 40);
}

#[test]
fn euler_orders_match_the_weighted_degree() {
    common::euler_sweep(13, 100).unwrap();
}

#[test]
fn random_families_are_consistent() {
    common::consistency_sweep(14, 10, 4).unwrap();
}

#[test]
fn consistency_patterns() {
    assert!(common::consistency_violation(&["fails", "holds", "holds"]).is_some());
    assert!(common::consistency_violation(&["holds", "holds", "fails"]).is_some());
    assert!(common::consistency_violation(&["holds", "fails", "holds"]).is_some());
    assert!(common::consistency_violation(&["holds", "undecided", "holds"]).is_none());
    assert!(common::consistency_violation(&["fails", "fails", "fails"]).is_none());
}
