use perfdisc::asymptotics::{acc_time_order1, NonperturbativeAccTime};
use perfdisc::field_io::{compare_fields, sweep, sweep_with, FieldGrid, FieldKind, SweepOptions};
use perfdisc::oracle::{acc_time_fd, build_grid, steady_state_fd, NodeClass};
use perfdisc::{F32Point, F32RawScene, Point, RawHole, RawScene, Scene};

fn p(x: f64, y: f64) -> Point {
    Point::new(x, y)
}

fn two_holes(nu: f64) -> Scene {
    RawScene::with_nu(nu, vec![RawHole::new(p(0.3, 0.1), 1.0), RawHole::new(p(-0.35, -0.2), 1.6)])
        .source(0.5, p(0.0, 0.6))
        .validate()
        .unwrap()
}

#[test]
fn single_precision_pipeline_tracks_double() {
    let raw32 = F32RawScene::with_nu(0.1, vec![perfdisc::scene::RawHole::new(F32Point::new(0.3, 0.1), 1.0)])
        .source(0.5, F32Point::new(0.0, 0.6));
    let s32 = raw32.validate().unwrap();
    let s64 = RawScene::with_nu(0.1, vec![RawHole::new(p(0.3, 0.1), 1.0)])
        .source(0.5, p(0.0, 0.6))
        .validate()
        .unwrap();
    for (x, y) in [(0.7, 0.2), (-0.5, -0.5), (0.1, -0.8)] {
        let t32 = acc_time_order1(&s32, F32Point::new(x as f32, y as f32)).unwrap();
        let t64 = acc_time_order1(&s64, p(x, y)).unwrap();
        assert!(((t32 as f64 - t64) / t64).abs() < 1e-4, "{t32} vs {t64}");
    }
}

#[test]
fn csv_file_round_trip() {
    let scene = two_holes(0.1);
    let grid = sweep(&scene, FieldKind::AccTimeOrder1, SweepOptions::square(17)).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    grid.save(&path).unwrap();
    let back = FieldGrid::load(&path).unwrap();
    assert_eq!(back.metadata, grid.metadata);
    assert_eq!(back.values.len(), grid.values.len());
    for (a, b) in back.values.iter().zip(&grid.values) {
        assert!(a.to_bits() == b.to_bits() || (a.is_nan() && b.is_nan()));
    }
}

#[test]
fn lattice_steady_state_is_within_order_nu_of_constant_for_equal_values() {
    let scene = RawScene::with_epsilon(0.05, vec![RawHole::new(p(0.3, 0.0), 2.0), RawHole::new(p(-0.3, 0.0), 2.0)])
        .validate()
        .unwrap();
    let u = steady_state_fd(&scene, 1.0 / 64.0).unwrap();
    for (_, v) in u.finite_nodes() {
        assert!((v - 2.0).abs() < 1e-8);
    }
}

#[test]
fn oracle_converges_under_refinement() {
    let scene = RawScene::with_epsilon(0.05, vec![RawHole::new(p(0.1, 0.0), 1.0)])
        .validate()
        .unwrap();
    let coarse = acc_time_fd(&scene, 1.0 / 64.0, 1e-2).unwrap();
    let fine = acc_time_fd(&scene, 1.0 / 128.0, 1e-2).unwrap();
    // sample the fine field on the coarse lattice (every other node)
    let mut sub = coarse.clone();
    for iy in 0..coarse.ny {
        for ix in 0..coarse.nx {
            sub.set(ix, iy, fine.get(2 * ix, 2 * iy));
        }
    }
    let report = compare_fields(&coarse, &sub, &[(p(0.1, 0.0), 0.15)]).unwrap();
    assert!(report.linf_rel < 0.03, "{report:?}");
}

#[test]
fn oracle_grid_classifies_every_node() {
    let scene = RawScene::with_epsilon(0.06, vec![RawHole::new(p(0.3, 0.1), 1.0), RawHole::new(p(-0.35, -0.2), 1.6)])
        .separation_min(0.2)
        .validate()
        .unwrap();
    let grid = build_grid(&scene, 1.0 / 64.0).unwrap();
    let total = grid.n_side * grid.n_side;
    let counted = grid.count(NodeClass::Exterior)
        + grid.count(NodeClass::Interior)
        + (0..scene.n_holes()).map(|j| grid.count(NodeClass::Hole(j))).sum::<usize>();
    assert_eq!(counted, total);
    assert!(grid.count(NodeClass::Hole(0)) > 0 && grid.count(NodeClass::Hole(1)) > 0);
}

#[test]
fn order_one_and_finite_s_times_approach_each_other_as_nu_shrinks() {
    let gap = |nu: f64| {
        let scene = two_holes(nu);
        let np = NonperturbativeAccTime::new(&scene, 1e-2).unwrap();
        let opts = SweepOptions::square(31).with_exclusion(0.1);
        let a = sweep(&scene, FieldKind::AccTimeOrder1, opts).unwrap();
        let b = sweep_with(&scene, "np", opts, |x| np.eval(x)).unwrap();
        compare_fields(&a, &b, &[]).unwrap().linf_rel
    };
    assert!(gap(0.05) < gap(0.1));
}

#[test]
fn finite_s_time_is_stable_under_base_halving() {
    let scene = two_holes(0.1);
    let a = NonperturbativeAccTime::new(&scene, 1e-2).unwrap();
    let b = NonperturbativeAccTime::new(&scene, 5e-3).unwrap();
    for x in [p(0.7, 0.0), p(-0.2, 0.5), p(0.0, -0.7)] {
        let (ta, tb) = (a.eval(x).unwrap(), b.eval(x).unwrap());
        assert!(((ta - tb) / tb).abs() < 1e-3, "{ta} vs {tb}");
    }
}
