use std::fs;
use std::io::{Error as IoError, ErrorKind};
use std::path::{Path, PathBuf};

use confstereo::io::{
    format_sig, load_confidence, load_disparity, loss_scan_csv, save_confidence, save_disparity, sparsification_csv,
    to_json,
};
use confstereo::metrics::default_densities;
use confstereo::toymodel::{train, LossMode, SceneConfig, TrainConfig};
use confstereo::{
    aggregate, auc, conf_guided_ensemble, evaluate, loss_scan as scan, optimal_confidence, sparsification,
    EnsembleConfig, Error, EvalReport64, FocusedLossParams, Result,
};

use crate::{AucOptArgs, EnsembleArgs, EvalArgs, LossArg, LossScanArgs, OptConfArgs, RocArgs, TrainToyArgs};

/// 1 for unreadable or malformed input, 3 for divergence, 2 for everything else.
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io(_) | Error::Format(_) => 1,
        Error::Divergence { .. } => 3,
        _ => 2,
    }
}

fn sig(x: f64) -> String {
    format_sig(x, 9)
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| IoError::new(e.kind(), format!("{}: {e}", path.display())).into())
}

fn with_path<T>(path: &Path, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Io(io) => IoError::new(io.kind(), format!("{}: {io}", path.display())).into(),
        Error::Format(m) => Error::Format(format!("{}: {m}", path.display())),
        other => other,
    })
}

fn summary_line(name: &str, r: &EvalReport64) -> String {
    let mut line = format!("{name}: epe {}", sig(r.epe));
    for (t, rate) in &r.error_rates {
        line += &format!(", >{}px {}", sig(*t), sig(*rate));
    }
    if let (Some(a), Some(o), Some(q)) = (r.auc, r.auc_opt, r.ratio) {
        line += &format!(", auc {}, auc_opt {}, ratio {}", sig(a), sig(o), sig(q));
    }
    line
}

fn emit_json(report: &EvalReport64, out: Option<&PathBuf>) -> Result<()> {
    let json = to_json(report)?;
    match out {
        Some(path) => write_text(path, &json),
        None => {
            print!("{json}");
            Ok(())
        }
    }
}

fn eval_one(pred: &Path, gt: &Path, conf: Option<&Path>, theta: f64, thresholds: &[f64]) -> Result<EvalReport64> {
    let p = with_path(pred, load_disparity::<f64>(pred))?;
    let g = with_path(gt, load_disparity::<f64>(gt))?;
    let c = conf.map(|path| with_path(path, load_confidence::<f64>(path))).transpose()?;
    evaluate(&p, &g, c.as_ref(), theta, thresholds)
}

fn is_map_file(path: &Path) -> bool {
    path.is_file()
        && path
            .extension()
            .and_then(|e| e.to_str())
            .is_some_and(|e| e.eq_ignore_ascii_case("pfm") || e.eq_ignore_ascii_case("png"))
}

/// Map files of a directory sorted by file name.
fn map_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for entry in with_path(dir, fs::read_dir(dir).map_err(Error::from))? {
        let path = entry?.path();
        if is_map_file(&path) {
            files.push(path);
        }
    }
    files.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
    Ok(files)
}

/// The file in `dir` with the same stem as `like`, preferring the same name.
fn counterpart(dir: &Path, like: &Path) -> Result<PathBuf> {
    let same = dir.join(like.file_name().unwrap_or_default());
    if is_map_file(&same) {
        return Ok(same);
    }
    let stem = like.file_stem().unwrap_or_default();
    map_files(dir)?.into_iter().find(|p| p.file_stem() == Some(stem)).ok_or_else(|| {
        IoError::new(ErrorKind::NotFound, format!("no counterpart of {} in {}", like.display(), dir.display())).into()
    })
}

pub fn eval(a: EvalArgs) -> Result<()> {
    if !a.pred.is_dir() {
        let report = eval_one(&a.pred, &a.gt, a.conf.as_deref(), a.theta, &a.thresholds)?;
        if a.out.is_some() {
            println!("{}", summary_line(&a.pred.display().to_string(), &report));
        }
        return emit_json(&report, a.out.as_ref());
    }

    let preds = map_files(&a.pred)?;
    if preds.is_empty() {
        return Err(Error::Invalid(format!("no .pfm or .png files in {}", a.pred.display())));
    }
    let mut reports = Vec::with_capacity(preds.len());
    for pred in &preds {
        let gt = counterpart(&a.gt, pred)?;
        let conf = a.conf.as_deref().map(|dir| counterpart(dir, pred)).transpose()?;
        let report = eval_one(pred, &gt, conf.as_deref(), a.theta, &a.thresholds)?;
        if a.out.is_some() {
            let name = pred.file_name().unwrap_or_default().to_string_lossy();
            println!("{}", summary_line(&name, &report));
        }
        reports.push(report);
    }
    let eps: Vec<f64> = reports.iter().map(|r| r.epsilon).collect();
    let total = aggregate(&reports, &eps)?;
    if a.out.is_some() {
        println!("{}", summary_line(&format!("aggregate of {} images", reports.len()), &total));
    }
    emit_json(&total, a.out.as_ref())
}

pub fn roc(a: RocArgs) -> Result<()> {
    let pred = with_path(&a.pred, load_disparity::<f64>(&a.pred))?;
    let gt = with_path(&a.gt, load_disparity::<f64>(&a.gt))?;
    let conf = with_path(&a.conf, load_confidence::<f64>(&a.conf))?;
    let curve = sparsification(&pred, &gt, &conf, a.theta, &default_densities())?;
    let csv = sparsification_csv(&curve);
    match &a.out {
        Some(path) => {
            write_text(path, &csv)?;
            println!("auc {}, full-density error {}", sig(auc(&curve)), sig(curve.full_density_error()));
        }
        None => print!("{csv}"),
    }
    Ok(())
}

pub fn ensemble(a: EnsembleArgs) -> Result<()> {
    let pred = with_path(&a.pred, load_disparity::<f64>(&a.pred))?;
    let conf = with_path(&a.conf, load_confidence::<f64>(&a.conf))?;
    let baseline = with_path(&a.baseline, load_disparity::<f64>(&a.baseline))?;
    let cfg = EnsembleConfig::new(a.fraction)?;
    let out = conf_guided_ensemble(&pred, &conf, &baseline, &cfg)?;
    let replaced = (0..out.len()).filter(|&i| out.value(i) != pred.value(i)).count();
    with_path(&a.out, save_disparity(&out, &a.out))?;
    println!("replaced {replaced} of {} valid pixels", pred.n_valid());
    Ok(())
}

fn loss_params(k: f64, a: f64, gamma: f64) -> Result<FocusedLossParams<f64>> {
    FocusedLossParams::new(k, a, gamma)
}

pub fn loss_scan(a: LossScanArgs) -> Result<()> {
    fs::create_dir_all(&a.out_dir).map_err(|e| IoError::new(e.kind(), format!("{}: {e}", a.out_dir.display())))?;
    for &gamma in &a.gamma {
        let params = loss_params(a.params.k, a.params.a, gamma)?;
        for &r in &a.residual {
            let points = scan(r, &params, a.points)?;
            let path = a.out_dir.join(format!("loss_r{}_gamma{}.csv", sig(r), sig(gamma)));
            write_text(&path, &loss_scan_csv(&points))?;
            let c_star = optimal_confidence(r, &params)?;
            println!(
                "{}: residual {}, gamma {}, optimal confidence {}",
                path.display(),
                sig(r),
                sig(gamma),
                sig(c_star)
            );
        }
    }
    Ok(())
}

pub fn opt_conf(a: OptConfArgs) -> Result<()> {
    let params = loss_params(a.params.k, a.params.a, a.gamma)?;
    println!("{}", sig(optimal_confidence(a.residual, &params)?));
    Ok(())
}

pub fn auc_opt(a: AucOptArgs) -> Result<()> {
    println!("{}", sig(confstereo::auc_opt(a.epsilon)?));
    Ok(())
}

pub fn train_toy(a: TrainToyArgs) -> Result<()> {
    let scene = SceneConfig {
        seed: a.seed,
        outlier_frac: a.outlier_frac,
        noise_sigma: a.noise_sigma,
        outlier_magnitude: a.outlier_magnitude,
        ..SceneConfig::default()
    }
    .generate::<f64>()?;
    let mut cfg = TrainConfig::<f64> {
        seed: a.seed,
        iterations: a.iterations,
        learning_rate: a.learning_rate,
        ..TrainConfig::default()
    };
    cfg.loss_params = cfg.loss_params.with_gamma(a.gamma);
    let mode = match a.loss {
        LossArg::Focused => LossMode::Focused,
        LossArg::L1 => LossMode::PlainL1,
    };
    let (_, report) = train(&cfg, &scene, mode)?;

    fs::create_dir_all(&a.out_dir).map_err(|e| IoError::new(e.kind(), format!("{}: {e}", a.out_dir.display())))?;
    write_text(&a.out_dir.join("report.json"), &to_json(&report)?)?;
    let disp_path = a.out_dir.join("disparity.pfm");
    with_path(&disp_path, save_disparity(&report.prediction, &disp_path))?;
    let conf_path = a.out_dir.join("confidence.pfm");
    with_path(&conf_path, save_confidence(&report.confidence, &conf_path))?;
    println!(
        "loss {} -> {}, clean epe {}, auc {} (constant {}), mean confidence clean {} corrupted {}",
        sig(report.initial_loss),
        sig(report.final_loss),
        sig(report.clean_epe),
        sig(report.auc),
        sig(report.constant_auc),
        sig(report.mean_conf_clean),
        report.mean_conf_corrupted.map_or_else(|| "n/a".into(), sig),
    );
    Ok(())
}
