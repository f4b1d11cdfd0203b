//! Trains focused and plain-L1 models on the standard synthetic scene over
//! several seeds and prints clean-pixel EPE and confidence AUC.
//!
//! cargo run --release -p confstereo --example focus_experiment -- [seeds] [gamma] [first_seed]

use confstereo::toymodel::{train, LossMode, SceneConfig, TrainConfig};

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let seeds: u64 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(20);
    let gamma: f64 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(1.0);
    let first: u64 = args.get(3).and_then(|s| s.parse().ok()).unwrap_or(0);
    let mut focused = Vec::new();
    let mut plain = Vec::new();
    let mut auc_wins = 0;
    let start = std::time::Instant::now();
    for seed in first..first + seeds {
        let scene = SceneConfig { seed, ..SceneConfig::default() }.generate::<f64>().unwrap();
        let mut cfg = TrainConfig::<f64> { seed, ..TrainConfig::default() };
        cfg.loss_params.gamma = gamma;
        let (_, f) = train(&cfg, &scene, LossMode::Focused).unwrap();
        let (_, p) = train(&cfg, &scene, LossMode::PlainL1).unwrap();
        println!(
            "seed {seed:2}: focused epe {:.4} (corr {:.3})  l1 epe {:.4} (corr {:.3})  auc {:.4} vs const {:.4}  conf clean {:.3} corrupted {:.3}  loss {:.3}->{:.3}",
            f.clean_epe,
            f.corrupted_epe.unwrap_or(f64::NAN),
            p.clean_epe,
            p.corrupted_epe.unwrap_or(f64::NAN),
            f.auc,
            f.constant_auc,
            f.mean_conf_clean,
            f.mean_conf_corrupted.unwrap_or(f64::NAN),
            f.initial_loss,
            f.final_loss,
        );
        if f.auc < f.constant_auc {
            auc_wins += 1;
        }
        focused.push(f.clean_epe);
        plain.push(p.clean_epe);
    }
    let (mf, mp) = (median(focused), median(plain));
    println!(
        "median clean EPE: focused {mf:.4}, plain {mp:.4}, reduction {:.1}%; auc wins {auc_wins}/{seeds}; {:.1}s",
        100.0 * (1.0 - mf / mp),
        start.elapsed().as_secs_f64()
    );
}
