use rand::Rng;
use rayon::prelude::*;

use spinal_core::analysis::error_floor;
use spinal_core::channel::ChannelModel;
use spinal_core::codec::CodeParams;
use spinal_core::montecarlo::{estimate_bler, estimate_with, sweep, Simulator, StopRule, SweepPlan, TrialPlan};
use spinal_core::SpinalError;

fn pool(threads: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap()
}

#[test]
fn no_errors_far_above_threshold() {
    let p = CodeParams::new(8, 4, 8, 4).unwrap();
    assert!(error_floor(&p).p_ef < 1e-8);
    let plan = TrialPlan::new(p, ChannelModel::Awgn, 200.0, StopRule::Fixed { trials: 10_000 }, 9);
    let est = estimate_bler(&plan).unwrap();
    assert_eq!((est.errors, est.trials), (0, 10_000));
    assert_eq!(est.ci_low, 0.0);
}

#[test]
fn outcomes_independent_of_thread_count() {
    let p = CodeParams::new(8, 4, 4, 1).unwrap();
    let plan = TrialPlan::new(p, ChannelModel::Rayleigh, 8.0, StopRule::Fixed { trials: 10_000 }, 3);
    let sim = Simulator::new(plan.clone()).unwrap();
    let run = |threads| {
        pool(threads).install(|| {
            (0..10_000u64)
                .into_par_iter()
                .map(|i| sim.run_trial(i).unwrap())
                .collect::<Vec<bool>>()
        })
    };
    let one = run(1);
    assert!(one.iter().any(|&e| e) && one.iter().any(|&e| !e));
    assert_eq!(one, run(8));

    let stop = StopRule::TargetErrors {
        errors: 150,
        max_trials: 100_000,
    };
    let plan = TrialPlan { stop, ..plan };
    let a = pool(1).install(|| estimate_bler(&plan).unwrap());
    let b = pool(8).install(|| estimate_bler(&plan).unwrap());
    assert_eq!(a, b);
    assert_eq!(a.errors, 150);
}

#[test]
fn wilson_coverage_near_nominal() {
    let p = 0.05;
    let reps = 1000u64;
    let covered = (0..reps)
        .filter(|&rep| {
            let est = estimate_with(StopRule::Fixed { trials: 400 }, rep, |_, rng| {
                Ok(rng.random::<f64>() < p)
            })
            .unwrap();
            est.ci_low <= p && p <= est.ci_high
        })
        .count() as f64
        / reps as f64;
    assert!((0.93..=0.97).contains(&covered), "coverage {covered}");
}

#[test]
fn sweep_honours_bit_cap() {
    let p = CodeParams::new(8, 4, 4, 1).unwrap();
    let plan = SweepPlan {
        bit_cap: 6,
        ..SweepPlan::new(p, ChannelModel::Awgn, vec![10.0], 1).with_stop(StopRule::Fixed { trials: 1 })
    };
    assert!(matches!(
        sweep(&plan),
        Err(SpinalError::BudgetExceeded { n: 8, cap: 6 })
    ));
    assert!(sweep(&SweepPlan { bit_cap: 8, ..plan }).is_ok());
}

#[test]
fn sweep_joins_analysis_columns() {
    let p = CodeParams::new(8, 4, 8, 1).unwrap();
    let grid = [0.0, 10.0, 20.0, 30.0, 40.0, 50.0];
    let recs =
        sweep(&SweepPlan::new(p, ChannelModel::Awgn, grid.to_vec(), 17).with_stop(StopRule::Fixed { trials: 4000 }))
            .unwrap();
    assert_eq!(recs.len(), grid.len());
    for r in &recs {
        assert_eq!(r.floor, recs[0].floor);
        assert_eq!(r.threshold_db, recs[0].threshold_db);
        assert!(r.bound >= r.floor);
    }
    for w in recs.windows(2) {
        // Non-increasing up to confidence-interval noise.
        assert!(
            w[1].estimate.p_hat <= w[0].estimate.ci_high,
            "{} dB -> {} dB",
            w[0].gamma_db,
            w[1].gamma_db
        );
    }
    assert!(recs[0].estimate.p_hat > 0.5);

    // Threshold column does not move with L either.
    let p2 = CodeParams::new(8, 4, 8, 2).unwrap();
    let recs2 =
        sweep(&SweepPlan::new(p2, ChannelModel::Awgn, vec![30.0], 17).with_stop(StopRule::Fixed { trials: 10 }))
            .unwrap();
    assert_eq!(recs2[0].master_seed, 17);
    assert_eq!(recs2[0].threshold_db, recs[0].threshold_db);
    assert!(recs2[0].floor < recs[0].floor);
}
