//! End-to-end flows across modules: text formats, transport, interpolation
//! and the calculus on generated grids.

use lorentzlab::calculus::{mcshane_extend, null_distances_from, ExtensionMode};
use lorentzlab::io::{parse_measure, parse_spacetime, write_measure, write_spacetime};
use lorentzlab::transport::{intermediate_measure, lq_distance, DiscreteMeasure, LqStatus};
use lorentzlab::{DiscreteSpacetime, ExtReal};

const CHAIN: &str = "n 4\nweights\n1\n1\n1\n1\nell\n0 1 1\n1 2 1\n2 3 1\n0 2 2.5\n1 3 2.5\n0 3 4\n";

fn grid() -> DiscreteSpacetime {
    DiscreteSpacetime::minkowski_grid(2, &[(-0.5, 8.5), (-4.5, 4.5)], &[9, 9]).unwrap()
}

#[test]
fn text_round_trip_preserves_separations_and_validity() {
    let s = parse_spacetime(CHAIN).unwrap();
    assert!(s.validate(1e-12).is_valid());
    let back = parse_spacetime(&write_spacetime(&s)).unwrap();
    assert_eq!(s.ell_matrix(), back.ell_matrix());
    let g = grid();
    let gb = parse_spacetime(&write_spacetime(&g)).unwrap();
    assert_eq!(g.ell_matrix(), gb.ell_matrix());
    let mu = DiscreteMeasure::uniform_on(4, &[0, 2]).unwrap();
    assert_eq!(parse_measure(&write_measure(&mu), 4).unwrap(), mu);
}

#[test]
fn dirac_transport_is_the_separation_and_reverse_triangle_holds() {
    let s = grid();
    let g = s.grid().unwrap().clone();
    let (a, b, c) = (g.flat_index(&[0, 4]), g.flat_index(&[3, 5]), g.flat_index(&[8, 3]));
    let d = |x| DiscreteMeasure::dirac(s.len(), x).unwrap();
    for q in [0.5, -1.0] {
        let ab = lq_distance(&s, &d(a), &d(b), q).unwrap();
        assert_eq!(ab.status, LqStatus::Optimal);
        // (ℓ^q)^{1/q} round-off only
        assert!((ab.value.to_f64() - s.ell(a, b).to_f64()).abs() <= 1e-14 * s.ell(a, b).to_f64());
        let ac = lq_distance(&s, &d(a), &d(c), q).unwrap().value.to_f64();
        let bc = lq_distance(&s, &d(b), &d(c), q).unwrap().value.to_f64();
        assert!(ac >= ab.value.to_f64() + bc - 1e-12);
    }
}

#[test]
fn midpoints_split_the_transport_distance() {
    let s = grid();
    let g = s.grid().unwrap().clone();
    let mu = DiscreteMeasure::uniform_on(s.len(), &[g.flat_index(&[0, 3]), g.flat_index(&[0, 5])]).unwrap();
    let nu = DiscreteMeasure::uniform_on(s.len(), &[g.flat_index(&[8, 3]), g.flat_index(&[8, 5])]).unwrap();
    let r = intermediate_measure(&s, &mu, &nu, 0.5, 0.5, f64::INFINITY).unwrap();
    assert_eq!(r.snapping_error, 0.0);
    let first = lq_distance(&s, &mu, &r.xi, 0.5).unwrap().value.to_f64();
    let second = lq_distance(&s, &r.xi, &nu, 0.5).unwrap().value.to_f64();
    let total = r.lq.to_f64();
    assert!((first - total / 2.0).abs() < 1e-12 && (second - total / 2.0).abs() < 1e-12, "{first} {second} {total}");
}

#[test]
fn time_coordinate_null_distance_and_extensions() {
    let s = grid();
    let g = s.grid().unwrap().clone();
    let f: Vec<f64> = (0..s.len()).map(|i| g.centre(i)[0]).collect();
    let x = g.flat_index(&[4, 4]);
    let d = null_distances_from(&s, &f, x).unwrap();
    for y in 0..s.len() {
        if s.leq(x, y) || s.leq(y, x) {
            assert!((d[y] - (f[y] - f[x]).abs()).abs() < 1e-12);
        } else {
            assert!(d[y] > (f[y] - f[x]).abs());
        }
    }
    // bounding the time coordinate by ℓ-steepness from one sample
    let mut partial = vec![None; s.len()];
    partial[x] = Some(ExtReal::Finite(0.0));
    let lo = mcshane_extend(&s, &partial, 1.0, ExtensionMode::Lower).unwrap();
    let hi = mcshane_extend(&s, &partial, 1.0, ExtensionMode::Upper).unwrap();
    assert!((0..s.len()).all(|i| lo[i] <= hi[i]));
    assert_eq!((lo[x], hi[x]), (ExtReal::Finite(0.0), ExtReal::Finite(0.0)));
}
