use orderbench_core::aronszajn::AronszajnBuild;
use orderbench_core::backforth::{back_and_forth, embed_into_rationals};
use orderbench_core::order::{
    check_axioms, verify_disjoint_family, FiniteOrder, Omega, OmegaTwo, Rationals, UnitDyadics,
};
use orderbench_core::suslin::{labelled_full_tree, line_to_tree, tree_to_line, BranchOracle, HonestQ};
use orderbench_core::tree::normalize;
use orderbench_core::{Ordinal, Rat};

#[test]
fn rationals_against_unit_dyadics() {
    let iso = back_and_forth(&Rationals, &UnitDyadics, 24, 1 << 16).unwrap();
    for i in 0..12 {
        assert!(iso.get(i).is_some() && iso.preimage(i).is_some());
    }
    assert_eq!(iso.verify(&Rationals, &UnitDyadics).unwrap(), None);
}

#[test]
fn well_orders_embed() {
    for n in [1, 7, 40] {
        let w = embed_into_rationals(&Omega, n).unwrap();
        assert!(w.windows(2).all(|p| p[0] < p[1]));
        let w2 = embed_into_rationals(&OmegaTwo, n).unwrap();
        assert_eq!(w2.len(), n);
    }
    let f = FiniteOrder::from_keys(&[5, -2, 9, 0]);
    assert!(check_axioms(&f, 4).passed());
    let img = embed_into_rationals(&f, 4).unwrap();
    assert!(img[1] < img[3] && img[3] < img[0] && img[0] < img[2]);
}

#[test]
fn aronszajn_tree_normalizes_to_itself_or_less() {
    let support: Vec<Ordinal> = ["0", "1", "2", "w"].iter().map(|s| s.parse().unwrap()).collect();
    let grid: Vec<Rat> = (0..4).map(Rat::integer).collect();
    let b = AronszajnBuild::build(&support, &grid, Some(2)).unwrap();
    let t = b.to_tree(false).unwrap();
    let (n, _) = normalize(&t, 2).unwrap();
    let r = n.check_normal(2);
    assert!(r.passes(2) && r.passes(5) && r.passes(6), "{r:?}");
}

#[test]
fn branch_line_round_trip() {
    let t = labelled_full_tree(3, 3);
    let line = tree_to_line(&t).unwrap();
    assert_eq!(line.branches().len(), 27);
    assert!(line.check_total_order().is_ok());
    assert!(line.check_disjointness().is_ok());
    let fam = line.antichain_family(&t.max_antichain()).unwrap();
    assert!(verify_disjoint_family(&line, &fam, 64).unwrap().is_disjoint());
    let mut oracle = BranchOracle::new(&line).unwrap();
    let it = line_to_tree(&line, &mut oracle, 10).unwrap();
    assert_eq!(it.intervals.len(), 10);
}

#[test]
fn q_is_not_a_suslin_line() {
    let it = line_to_tree(&Rationals, &mut HonestQ::new(Rat::zero(), Rat::one(), 200), 10_000).unwrap();
    assert!(it.dense.is_some());
}
