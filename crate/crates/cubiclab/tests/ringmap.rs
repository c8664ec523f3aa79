use cubiclab::ring::{automorphisms, form_to_ring, induced_ring_map, ring_disc, ring_to_form};
use cubiclab::verify::ringmap;
use cubiclab::CubicForm;

#[test]
fn exhaustive_small_box() {
    let r = ringmap(3);
    assert!(r.pass, "{:?}", r.checks);
    assert!(r.checks[0].detail == "all 2272 forms");
}

#[test]
fn round_trip_is_exact_on_the_normalized_table() {
    for f in [[1, 0, -1, 0], [0, 1, -1, 0], [1, 1, 2, 3], [2, -3, 0, 7], [-3, -3, 2, 2]] {
        let f = CubicForm::from_i64(f[0], f[1], f[2], f[3]);
        let ring = form_to_ring(&f);
        assert_eq!(ring_disc(&ring), f.disc());
        assert_eq!(ring_to_form(&ring.table()).unwrap(), f);
        for m in automorphisms(&f).unwrap() {
            assert!(induced_ring_map(&f, &m).is_some());
        }
    }
}
