use std::path::Path;
use std::process::{Command, Output};

use cimit::imaging::{read_pgm, write_pgm, GrayImage};

fn cimit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cimit"))
        .args(args)
        .output()
        .expect("spawn cimit")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn last_field(o: &Output) -> String {
    let out = stdout(o);
    let line = out.lines().last().expect("output line");
    line.rsplit(',').next().unwrap().trim().to_string()
}

fn save(img: &GrayImage, path: &Path) {
    std::fs::write(path, write_pgm(img)).unwrap();
}

fn load(path: &Path) -> GrayImage {
    read_pgm(&std::fs::read(path).unwrap()).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn metrics_match_closed_forms() {
    let o = cimit(&["metrics", "eta", "--m", "8", "--nw", "4"]);
    assert!(o.status.success());
    assert_eq!(last_field(&o), "11");

    let o = cimit(&["metrics", "eta", "--m", "4", "--nw", "0"]);
    assert_eq!(last_field(&o), "2");

    let o = cimit(&["metrics", "energy", "--m", "4", "--nw", "2", "--vs", "qam"]);
    assert!(o.status.success());
    assert_eq!(last_field(&o), "66.7");

    let o = cimit(&["metrics", "energy", "--m", "16", "--nw", "2", "--vs", "sm", "--nt", "4"]);
    assert_eq!(last_field(&o), "25.0");

    let o = cimit(&["metrics", "throughput", "--m", "4", "--nw", "2", "--aber", "0.5", "--ts", "2"]);
    assert_eq!(last_field(&o), "1.5");
}

#[test]
fn ber_sweep_writes_one_row_per_point() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ber.csv");
    let o = cimit(&[
        "ber", "--scheme", "cim", "--m", "4", "--nw", "2", "--l", "16", "--nr", "2",
        "--snr", "10:5:20", "--seed", "3", "--max-bits", "20000", "--out", p(&out),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("# config:"));
    assert_eq!(lines[1], "snr_db,bits,errors,ber,throughput");
    let snrs: Vec<f64> = lines[2..]
        .iter()
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(snrs, vec![10.0, 15.0, 20.0]);
}

#[test]
fn ber_sweep_for_baselines() {
    let dir = tempfile::tempdir().unwrap();
    for scheme in ["qam", "psk"] {
        let out = dir.path().join(format!("{scheme}.csv"));
        let o = cimit(&[
            "ber", "--scheme", scheme, "--m", "16", "--snr", "inf", "--max-bits", "4000", "--out", p(&out),
        ]);
        assert!(o.status.success());
        let text = std::fs::read_to_string(&out).unwrap();
        let row = text.lines().nth(2).unwrap();
        let errors: u64 = row.split(',').nth(2).unwrap().parse().unwrap();
        assert_eq!(errors, 0, "{scheme}: {row}");
    }
}

#[test]
fn usage_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");
    let missing_l = cimit(&["ber", "--scheme", "cim", "--m", "4", "--nw", "2", "--snr", "10", "--out", p(&out)]);
    assert_eq!(missing_l.status.code(), Some(2));
    assert!(!out.exists());

    let bad_range = cimit(&["ber", "--scheme", "qam", "--m", "4", "--snr", "20:5:10", "--out", p(&out)]);
    assert_eq!(bad_range.status.code(), Some(2));

    let bad_order = cimit(&["metrics", "eta", "--m", "6", "--nw", "1"]);
    assert_eq!(bad_order.status.code(), Some(2));

    let img = dir.path().join("a.pgm");
    save(&GrayImage::filled(8, 8, 100), &img);
    let unknown = cimit(&["enhance", "--in", p(&img), "--filter", "sharpen", "--out", p(&out)]);
    assert_eq!(unknown.status.code(), Some(2));
}

#[test]
fn missing_input_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let o = cimit(&[
        "send-image", "--in", p(&dir.path().join("nope.pgm")), "--scheme", "qam", "--m", "4",
        "--snr", "20", "--out", p(&dir.path().join("rx.pgm")),
    ]);
    assert_eq!(o.status.code(), Some(1));

    let garbage = dir.path().join("garbage.pgm");
    std::fs::write(&garbage, b"not an image").unwrap();
    let o = cimit(&["enhance", "--in", p(&garbage), "--filter", "median", "--out", p(&dir.path().join("o.pgm"))]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn noiseless_send_image_reproduces_input() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.pgm");
    let img = GrayImage::from_fn(23, 17, |x, y| ((x * 11 + y * 7) % 256) as u8);
    save(&img, &input);
    let rx = dir.path().join("rx.pgm");
    let report = dir.path().join("report.csv");
    let o = cimit(&[
        "send-image", "--in", p(&input), "--scheme", "cim", "--m", "16", "--nw", "3", "--l", "16",
        "--snr", "inf", "--seed", "1", "--out", p(&rx), "--report", p(&report),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(load(&rx).pixels(), img.pixels());
    let text = std::fs::read_to_string(&report).unwrap();
    let row = text.lines().last().unwrap();
    assert_eq!(text.lines().nth(1), Some("ber,psnr"));
    assert!(row.starts_with("0e0,inf"), "{row}");
}

#[test]
fn send_image_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.pgm");
    save(&GrayImage::test_pattern(32, 32), &input);
    let run = |name: &str, workers: &str| {
        let rx = dir.path().join(name);
        let o = cimit(&[
            "send-image", "--in", p(&input), "--m", "4", "--nw", "2", "--l", "16", "--snr", "8",
            "--seed", "42", "--workers", workers, "--out", p(&rx),
        ]);
        assert!(o.status.success());
        load(&rx)
    };
    let a = run("a.pgm", "1");
    let b = run("b.pgm", "3");
    assert_eq!(a.pixels(), b.pixels());
}

#[test]
fn filters_preserve_constant_images() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("flat.pgm");
    let flat = GrayImage::filled(20, 12, 77);
    save(&flat, &input);
    for filter in ["median", "majority", "morph", "wiener", "wavelet", "nlm", "pipeline"] {
        let out = dir.path().join(format!("{filter}.pgm"));
        let o = cimit(&["enhance", "--in", p(&input), "--filter", filter, "--out", p(&out)]);
        assert!(o.status.success(), "{filter}: {}", String::from_utf8_lossy(&o.stderr));
        let got = load(&out);
        assert_eq!((got.width(), got.height()), (20, 12));
        assert_eq!(got.pixels(), flat.pixels(), "{filter}");
    }
}

#[test]
fn median_improves_psnr_against_reference() {
    let dir = tempfile::tempdir().unwrap();
    let clean = GrayImage::test_pattern(64, 64);
    let mut noisy = clean.clone().into_pixels();
    for (i, v) in noisy.iter_mut().enumerate() {
        if (i * 2654435761) % 97 < 5 {
            *v = 255 - *v;
        }
    }
    let noisy = GrayImage::new(64, 64, noisy).unwrap();
    let (ref_path, in_path, out) = (
        dir.path().join("ref.pgm"),
        dir.path().join("noisy.pgm"),
        dir.path().join("out.pgm"),
    );
    save(&clean, &ref_path);
    save(&noisy, &in_path);
    let o = cimit(&[
        "enhance", "--in", p(&in_path), "--filter", "median", "--radius", "1",
        "--ref", p(&ref_path), "--out", p(&out),
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    let row: Vec<&str> = text.lines().last().unwrap().split(',').collect();
    let (before, after): (f64, f64) = (row[1].parse().unwrap(), row[2].parse().unwrap());
    assert!(after > before, "{text}");
}
