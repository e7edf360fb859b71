use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use sliced_ae::harness::data::{parse_idx_images, write_csv_points};
use sliced_ae::harness::{distance_cmd, evaluate_checkpoint, gen_synthetic, load_idx, train, RunConfig};
use sliced_ae::metrics::METRICS_HEADER;
use sliced_ae::{DistanceKind, Error, Matrix, MetricsRow};

fn small_config(dir: &Path, epochs: usize) -> RunConfig {
    let mut cfg = RunConfig::parse(
        "data = gaussian_mixture\n\
         data_n = 200\n\
         latent = 2\n\
         hidden = 16\n\
         projections = 10\n\
         batch_size = 40\n\
         checkpoint_every = 2\n\
         seed = 3\n",
    )
    .unwrap();
    cfg.epochs = epochs;
    cfg.output = dir.to_path_buf();
    cfg
}

fn idx_bytes(magic: u32, dims: &[u32], payload: &[u8]) -> Vec<u8> {
    let mut out = magic.to_be_bytes().to_vec();
    for d in dims {
        out.extend_from_slice(&d.to_be_bytes());
    }
    out.extend_from_slice(payload);
    out
}

fn write_idx_images(dir: &Path, count: u32, side: u32) -> PathBuf {
    let pixels: Vec<u8> = (0..count * side * side).map(|i| (i * 37 % 256) as u8).collect();
    let path = dir.join("images.idx");
    fs::write(&path, idx_bytes(0x0803, &[count, side, side], &pixels)).unwrap();
    path
}

fn assert_valid_pgm(path: &Path) {
    let bytes = fs::read(path).unwrap();
    let text = String::from_utf8_lossy(&bytes[..bytes.len().min(32)]).to_string();
    let mut fields = text.split_ascii_whitespace();
    assert_eq!(fields.next(), Some("P5"), "{}", path.display());
    let w: usize = fields.next().unwrap().parse().unwrap();
    let h: usize = fields.next().unwrap().parse().unwrap();
    assert_eq!(fields.next(), Some("255"));
    let header = format!("P5\n{w} {h}\n255\n");
    assert!(bytes.starts_with(header.as_bytes()));
    assert_eq!(bytes.len(), header.len() + w * h, "{}", path.display());
}

fn read_rows(path: &Path) -> Vec<MetricsRow> {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(METRICS_HEADER));
    lines.map(|l| MetricsRow::from_csv(l).unwrap()).collect()
}

#[test]
fn zero_epochs_logs_only_initialization() {
    let dir = tempfile::tempdir().unwrap();
    let run = train(&small_config(dir.path(), 0)).unwrap();
    let rows = read_rows(&run.dir.join("metrics.csv"));
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0].epoch, 0);
    assert!(run.dir.join("checkpoint-final.json").exists());
}

#[test]
fn runs_are_reproducible_and_complete() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let ra = train(&small_config(a.path(), 4)).unwrap();
    let rb = train(&small_config(b.path(), 4)).unwrap();
    let ma = fs::read(ra.dir.join("metrics.csv")).unwrap();
    assert_eq!(ma, fs::read(rb.dir.join("metrics.csv")).unwrap());
    assert_eq!(ra.state, rb.state);

    let rows = read_rows(&ra.dir.join("metrics.csv"));
    let epochs: Vec<usize> = rows.iter().map(|r| r.epoch).collect();
    assert_eq!(epochs, vec![0, 1, 2, 3, 4]);
    for name in ["checkpoint-00002.json", "checkpoint-00004.json", "checkpoint-final.json", "config.txt", "summary.txt"] {
        assert!(ra.dir.join(name).exists(), "{name}");
    }
    for name in ["reconstructions.pgm", "samples.pgm"] {
        assert_valid_pgm(&ra.dir.join(name));
    }
    let cfg = RunConfig::load(ra.dir.join("config.txt")).unwrap();
    let again = evaluate_checkpoint(ra.dir.join("checkpoint-final.json"), &cfg).unwrap();
    assert_eq!(&again, ra.last());
}

#[test]
fn image_runs_write_valid_grids() {
    let dir = tempfile::tempdir().unwrap();
    let images = write_idx_images(dir.path(), 20, 4);
    let mut cfg = RunConfig::parse("data = idx\nlatent = 3\nhidden = 8\nprojections = 5\nbatch_size = 5\n").unwrap();
    cfg.set("data_path", images.to_str().unwrap()).unwrap();
    cfg.epochs = 2;
    cfg.output = dir.path().join("run");
    let run = train(&cfg).unwrap();
    for name in ["reconstructions.pgm", "samples.pgm", "interpolation.pgm"] {
        assert_valid_pgm(&run.dir.join(name));
    }
}

#[test]
fn divergent_training_reports_the_epoch() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = small_config(dir.path(), 3);
    cfg.apply_override("optimizer=sgd").unwrap();
    cfg.apply_override("lr=1e200").unwrap();
    match train(&cfg) {
        Err(Error::NonFiniteLoss { epoch }) => assert!(epoch >= 1),
        other => panic!("expected a non-finite loss, got {other:?}"),
    }
}

#[test]
fn idx_fixture_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    let pixels: Vec<u8> = (0..16).map(|i| i * 17).collect();
    let good = idx_bytes(0x0803, &[4, 2, 2], &pixels);
    let parsed = parse_idx_images(&good).unwrap();
    assert_eq!((parsed.points.rows(), parsed.points.cols()), (4, 4));
    assert_eq!(parsed.points.get(3, 3), 1.0);

    let path = dir.path().join("four.idx");
    fs::write(&path, &good).unwrap();
    let labels = dir.path().join("labels.idx");
    fs::write(&labels, idx_bytes(0x0801, &[4], &[0, 1, 2, 3])).unwrap();
    let data = load_idx(&path, Some(&labels)).unwrap();
    assert_eq!(data.train.rows() + data.test.rows(), 4);
    assert_eq!((data.dim(), data.image_shape), (4, Some((2, 2))));

    assert!(matches!(parse_idx_images(&idx_bytes(0x0801, &[4, 2, 2], &pixels)), Err(Error::IdxMagic { .. })));
    assert!(matches!(parse_idx_images(&idx_bytes(0x0803, &[5, 2, 2], &pixels)), Err(Error::IdxTruncated { .. })));
    fs::write(&labels, idx_bytes(0x0801, &[3], &[0, 1, 2])).unwrap();
    assert!(matches!(load_idx(&path, Some(&labels)), Err(Error::IdxDimension(_))));
}

#[test]
fn unknown_synthetic_kind_is_rejected() {
    assert!(matches!(gen_synthetic("spiral", 100, 0), Err(Error::UnknownDatasetKind(_))));
    assert!(gen_synthetic("ring", 5, 0).is_err());
}

#[test]
fn distance_reports() {
    let dir = tempfile::tempdir().unwrap();
    let zeros = dir.path().join("zeros.csv");
    write_csv_points(&zeros, &Matrix::zeros(50, 3)).unwrap();
    let r = distance_cmd(&zeros, None, DistanceKind::Scfw, 20, 1).unwrap();
    assert!((r.distance - 1.0).abs() < 1e-12, "{}", r.distance);

    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let normal = dir.path().join("normal.csv");
    let v: Vec<f64> = StandardNormal.sample_iter(&mut rng).take(5_000 * 3).collect();
    write_csv_points(&normal, &Matrix::from_vec(5_000, 3, v).unwrap()).unwrap();
    for kind in DistanceKind::ALL {
        let a = distance_cmd(&normal, None, kind, 20, 5).unwrap();
        let b = distance_cmd(&normal, None, kind, 20, 5).unwrap();
        assert_eq!(a.to_string(), b.to_string());
        assert!(a.distance < 0.02, "{kind}: {}", a.distance);
        assert!(a.mardia_kurtosis_normalized.abs() < 0.5, "{}", a.mardia_kurtosis_normalized);
    }

    let ragged = dir.path().join("ragged.csv");
    fs::write(&ragged, "1,2\n3\n").unwrap();
    assert!(matches!(distance_cmd(&ragged, None, DistanceKind::Sw, 5, 0), Err(Error::Csv { line: 2, .. })));
}

fn cli(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_sliced-ae")).args(args).output().unwrap()
}

#[test]
fn cli_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("ring.csv");
    let run = dir.path().join("run");
    let out = cli(&["gen-data", "--kind", "ring", "--n", "300", "--seed", "4", "--out", data.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let out = cli(&["distance", "--a", data.to_str().unwrap(), "--kind", "scvm", "--k", "10"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("sliced scvm distance to N(0,I)"));

    let config = dir.path().join("run.cfg");
    fs::write(&config, "data = csv\nlatent = 2\nhidden = 8\nprojections = 5\nbatch_size = 50\n").unwrap();
    let sets = [
        format!("data_path={}", data.display()),
        format!("output={}", run.display()),
        "epochs=2".to_string(),
    ];
    let mut args = vec!["train", "--config", config.to_str().unwrap()];
    for s in &sets {
        args.extend(["--set", s.as_str()]);
    }
    let out = cli(&args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(read_rows(&run.join("metrics.csv")).len(), 3);

    let checkpoint = run.join("checkpoint-final.json");
    let run_config = run.join("config.txt");
    let out = cli(&["eval", "--checkpoint", checkpoint.to_str().unwrap(), "--config", run_config.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout).to_string();
    let last = fs::read_to_string(run.join("metrics.csv")).unwrap().lines().last().unwrap().to_string();
    assert_eq!(stdout.lines().nth(1), Some(last.as_str()));

    let out = cli(&["train", "--set", "widht=3"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("widht"));
}
