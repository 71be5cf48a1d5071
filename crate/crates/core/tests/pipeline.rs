use ranklab::latmod::{lattice_decompose, CyclicLattice, LatticeMultiplicities};
use ranklab::perm::GroupSpec;
use ranklab::permgroup::{GroupTable, DEFAULT_CAP};
use ranklab::verify::{crosscheck, rank_report, Budget, Status};
use ranklab::Descriptor;

#[test]
fn group_file_round_trip_keeps_formula_dispatch() {
    let desc = Descriptor::SylowSym { n: 6, l: 2 };
    let text = desc.build().unwrap().to_file_string();
    let spec = GroupSpec::from_file_str(&text).unwrap();
    let r = rank_report(&spec, true, true, &Budget::default()).unwrap();
    assert_eq!(r.status, Status::Match);
    assert_eq!(r, crosscheck(&desc, &Budget::default()).unwrap());
}

#[test]
fn witness_has_the_reported_rank() {
    let r = crosscheck(&Descriptor::Xgroup { l: 2, a: 2, r: 1 }, &Budget::default()).unwrap();
    let w = GroupTable::closure(&r.witness.unwrap(), DEFAULT_CAP).unwrap();
    assert_eq!(u64::from(w.d_frattini(2).unwrap()), r.brute_value.unwrap());
}

#[test]
fn lattice_decomposition_survives_basis_change() {
    let m = LatticeMultiplicities { a: 1, b: 1, c: 1 };
    let lat = CyclicLattice::direct_sum(5, m).change_basis(11);
    assert_eq!(lattice_decompose(&lat, 2).unwrap(), m);
}
