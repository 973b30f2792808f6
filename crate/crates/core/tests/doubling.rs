use cliqueid::graph::{generate, Arc, GraphKind};
use cliqueid::protocol::{initial_configuration, step_in_place, Output};
use cliqueid::protocols::{Cig, CiwN, CiwNk, Phase};
use cliqueid::scheduler::{Schedule, ScheduleKind};
use cliqueid::transform::{f_transform, mirror_schedule, mirrored_run};

#[test]
fn three_way_equality_holds_for_every_protocol() {
    for n in [2usize, 3, 4] {
        let g = generate(GraphKind::Complete, n, 0).unwrap();
        for kind in [ScheduleKind::UniformRandom, ScheduleKind::RoundRobin, ScheduleKind::ShuffledRounds] {
            let sched = || Schedule::new(&g, kind, 17).with_seeded_order();
            let a = mirrored_run(&CiwN::new(n).unwrap(), &g, sched(), 10_000).unwrap();
            let b = mirrored_run(&CiwNk::new(n, n).unwrap(), &g, sched(), 10_000).unwrap();
            let c = mirrored_run(&Cig::new(), &g, sched(), 10_000).unwrap();
            for r in [&a, &b, &c] {
                assert!(r.held && r.image_covered, "{} n={n} {kind}", r.protocol);
                assert!(!r.image_is_complete);
            }
            // knowing only n, the weak-fairness protocols accept the doubled graph
            assert!(a.image_all_yes() && b.image_all_yes());
            // the mirrored schedule is weakly but not globally fair, so the
            // image copies the base outputs for the size-estimating protocol too
            let doubled: Vec<Output> = c.base_outputs.iter().chain(&c.base_outputs).copied().collect();
            assert_eq!(c.image_outputs, doubled);
        }
    }
}

#[test]
fn ring_image_is_valid_and_mirrored_runs_hold() {
    let ring = generate(GraphKind::DirectedRing, 3, 0).unwrap();
    let f = f_transform(&ring);
    assert_eq!(f.validate(), Ok(()));
    assert_eq!(f.arc_count(), 2 * 3 + 2 + 2);
    let r =
        mirrored_run(&CiwN::new(3).unwrap(), &ring, Schedule::new(&ring, ScheduleKind::RoundRobin, 0), 5_000).unwrap();
    assert!(r.held && r.image_covered);
    assert!(r.image_outputs.iter().all(|&o| o == Output::No));
}

#[test]
fn copy_then_cross_in_one_block_breaks_the_mirror() {
    // applying copies and crosses for the same base interaction runs the
    // transition twice on node 0's copies
    let k2 = generate(GraphKind::Complete, 2, 0).unwrap();
    let p = CiwN::new(2).unwrap();
    let mut base = initial_configuration(&p, 2);
    let mut image = initial_configuration(&p, 4);
    step_in_place(&p, &mut base, Arc::new(0, 1));
    for a in [(0, 1), (2, 3), (0, 3), (2, 1)] {
        step_in_place(&p, &mut image, Arc::from(a));
    }
    assert_eq!(base[0].phase, Phase::Two);
    assert_eq!(image[0].phase, Phase::Three);
    assert_ne!(image[0], base[0]);

    let alternating = mirror_schedule(&k2, &[Arc::new(0, 1)]).unwrap();
    let mut image = initial_configuration(&p, 4);
    for a in alternating {
        step_in_place(&p, &mut image, a);
    }
    assert_eq!((image[0], image[2]), (base[0], base[0]));
}
