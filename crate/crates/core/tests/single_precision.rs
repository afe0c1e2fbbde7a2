use bsmaj::beamsplitter::{photon_chain_check, sorted_spectrum};
use bsmaj::majorization::compare;
use bsmaj::regions::find_crossovers;
use bsmaj::Relation;

#[test]
fn chain_holds_in_f32() {
    for v in photon_chain_check(10, 0.5f32).unwrap() {
        assert_eq!(v.relation, Relation::MajorizedBy);
    }
}

#[test]
fn incomparable_pair_in_f32() {
    let q = sorted_spectrum(3, 0.62f32).unwrap();
    let p = sorted_spectrum(3, 0.72f32).unwrap();
    assert!((q[0] - 0.44439).abs() < 1e-5);
    assert_eq!(compare(&p, &q).relation, Relation::Incomparable);
    let part = find_crossovers::<f32>(3).unwrap();
    assert_eq!(part.crossovers.len(), 2);
    assert!((part.crossovers[1] - 0.649_766_3).abs() < 1e-5);
}
