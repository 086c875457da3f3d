//! Acceptance suite. Each test prints one `criterion N: PASS/FAIL (...)`
//! line; run with `--nocapture` to see them all. The two domain-1000
//! enumerations are shared across tests through lazily initialized
//! artifacts.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::OnceLock;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use triads_core::exactmath::cross_reduce_with;
use triads_core::topology::{multiplicity_histogram, multiplicity_map};
use triads_core::{
    brute_enumerate, enumerate, solfile, solve_n_triple, BetaTable, DispersionSpec, MFamily,
    SolutionSet, Triad, WaveVector,
};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_triads")
}

fn work_dir() -> &'static PathBuf {
    static DIR: OnceLock<PathBuf> = OnceLock::new();
    DIR.get_or_init(|| {
        let dir = std::env::temp_dir().join(format!("triads-acceptance-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        dir
    })
}

struct Artifact {
    file: PathBuf,
    summary: String,
    secs: f64,
    set: SolutionSet,
}

fn run_enumerate(dispersion: &str, domain: u32, jobs: u32) -> Artifact {
    let file = work_dir().join(format!("{dispersion}-{domain}-j{jobs}.json"));
    let start = Instant::now();
    let out = Command::new(bin())
        .args([
            "enumerate",
            "--dispersion",
            dispersion,
            "--domain",
            &domain.to_string(),
            "--jobs",
            &jobs.to_string(),
            "--out",
        ])
        .arg(&file)
        .output()
        .expect("binary runs");
    let secs = start.elapsed().as_secs_f64();
    assert!(
        out.status.success(),
        "enumerate {dispersion} D={domain}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let summary = String::from_utf8(out.stdout).unwrap().trim().to_string();
    let set = solfile::from_json(&fs::read_to_string(&file).unwrap()).unwrap();
    Artifact {
        file,
        summary,
        secs,
        set,
    }
}

fn sphere_1000() -> &'static Artifact {
    static ARTIFACT: OnceLock<Artifact> = OnceLock::new();
    ARTIFACT.get_or_init(|| run_enumerate("sphere", 1000, 1))
}

fn channel_1000() -> &'static Artifact {
    static ARTIFACT: OnceLock<Artifact> = OnceLock::new();
    ARTIFACT.get_or_init(|| run_enumerate("channel", 1000, 8))
}

fn report(criterion: u32, ok: bool, detail: &str) {
    let verdict = if ok { "PASS" } else { "FAIL" };
    println!("criterion {criterion}: {verdict} ({detail})");
    assert!(ok, "criterion {criterion} failed: {detail}");
}

#[test]
fn criterion_01_sphere_count_at_domain_1000() {
    let a = sphere_1000();
    let ok = a.set.len() == 7282 && a.summary.contains("solutions=7282");
    report(
        1,
        ok,
        &format!(
            "sphere D=1000 gives {} triads, expected 7282; single-threaded in {:.1}s",
            a.set.len(),
            a.secs
        ),
    );
}

#[test]
fn criterion_02_channel_count_at_domain_1000() {
    let a = channel_1000();
    let ok = a.set.len() == 477 && a.summary.contains("solutions=477");
    report(
        2,
        ok,
        &format!("channel D=1000 gives {} triads, expected 477", a.set.len()),
    );
}

#[test]
fn criterion_03_channel_multiplicity_table() {
    let a = channel_1000();
    let hist = multiplicity_histogram(&a.set);
    let expected: BTreeMap<u32, u64> = [(1, 1254), (2, 72), (3, 8), (4, 1), (5, 1)].into();
    let at = |mult: u32| -> Vec<WaveVector> {
        multiplicity_map(&a.set)
            .into_iter()
            .filter(|&(_, c)| c == mult)
            .map(|(v, _)| v)
            .collect()
    };
    let five = at(5);
    let four = at(4);
    let ok = hist == expected
        && five == vec![WaveVector::new(1, 5)]
        && four == vec![WaveVector::new(78, 99)];
    report(
        3,
        ok,
        &format!(
            "channel D=1000 histogram {hist:?} vs expected {expected:?}; \
             multiplicity-5 vectors {five:?} vs expected [(1,5)]; \
             multiplicity-4 vectors {four:?} vs expected [(78,99)]"
        ),
    );
}

#[test]
fn criterion_04_sphere_50_census() {
    let dir = work_dir().join("census-sphere-50");
    let out = Command::new(bin())
        .args(["topology", "--dispersion", "sphere", "--domain", "50", "--out"])
        .arg(&dir)
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    let census: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.join("census.json")).unwrap()).unwrap();
    let totals = &census["totals"];
    let complex_certificates: Vec<String> = census["components"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["class_label"] == "complex")
        .map(|c| c["certificate_hash"].as_str().unwrap().to_string())
        .collect();
    let ok = census["triad_count"] == 42
        && totals["isolated"] == 15
        && totals["butterfly"] == 2
        && totals["chain(3)"] == 1
        && totals["complex"] == 2
        && totals.as_object().unwrap().len() == 4
        && complex_certificates.len() == 2;
    report(
        4,
        ok,
        &format!(
            "sphere D=50: triads={} totals={totals} complex certificates {complex_certificates:?}",
            census["triad_count"]
        ),
    );
}

#[test]
fn criterion_05_oracle_equivalence() {
    let start = Instant::now();
    let mut mismatches = Vec::new();
    for spec in [DispersionSpec::sphere(), DispersionSpec::channel()] {
        for domain in [10, 20, 30, 40, 50] {
            let fast = enumerate(&spec, domain, 1).unwrap();
            let slow = brute_enumerate(&spec, domain).unwrap();
            if fast.triads != slow.triads {
                mismatches.push(format!("{} D={domain}", spec.name));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let ok = mismatches.is_empty() && secs < 300.0;
    report(
        5,
        ok,
        &format!("10 domain/preset pairs in {secs:.1}s, mismatches: {mismatches:?}"),
    );
}

#[test]
fn criterion_06_cross_reduction_suite() {
    fn gcd128(mut a: u128, mut b: u128) -> u128 {
        while b != 0 {
            let r = a % b;
            a = b;
            b = r;
        }
        a
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let mut failures = 0u32;
    for _ in 0..100_000 {
        let q: [u64; 4] = std::array::from_fn(|_| rng.random_range(1..=1_000_000));
        let largest = q.into_iter().max().unwrap();
        let mut max_seen = 0u64;
        let p = cross_reduce_with(q[0], q[1], q[2], q[3], |v| max_seen = max_seen.max(v));
        let num = q[0] as u128 * q[2] as u128;
        let den = q[1] as u128 * q[3] as u128;
        let g = gcd128(num, den);
        let product = (
            p.f1.num() as u128 * p.f2.num() as u128,
            p.f1.den() as u128 * p.f2.den() as u128,
        );
        if product != (num / g, den / g) || max_seen > largest {
            failures += 1;
        }
    }
    report(
        6,
        failures == 0,
        &format!("100000 random quadruples in [1,10^6]^4, {failures} failures"),
    );
}

#[test]
fn criterion_07_resonance_soundness() {
    let mut total = 0u64;
    let mut bad = 0u64;
    for a in [sphere_1000(), channel_1000()] {
        let is_sphere = a.set.spec.name == "sphere";
        let beta = |n: u32| -> u128 {
            let n = n as u128;
            if is_sphere {
                n * (n + 1)
            } else {
                n * n + 1
            }
        };
        for t in &a.set.triads {
            let [k1, k2, k3] = t.vectors();
            let (b1, b2, b3) = (beta(k1.n), beta(k2.n), beta(k3.n));
            let identity =
                k1.m as u128 * b2 * b3 + k2.m as u128 * b1 * b3 == k3.m as u128 * b1 * b2;
            let m_sum = k1.m + k2.m == k3.m;
            let m_le_n = k1.m <= k1.n && k2.m <= k2.n && k3.m <= k3.n;
            let distinct = k1.n != k2.n && k1.n != k3.n && k2.n != k3.n;
            let sphere_extra = if is_sphere {
                let (n1, n2, n3) = (k1.n as i64, k2.n as i64, k3.n as i64);
                (n1 - n2).abs() <= n3 && n3 <= n1 + n2 && (n1 + n2 + n3) % 2 == 1
            } else {
                true
            };
            total += 1;
            if !(identity && m_sum && m_le_n && distinct && sphere_extra) {
                bad += 1;
            }
        }
    }
    let ok = bad == 0 && total == 7282 + 477;
    report(
        7,
        ok,
        &format!("{total} triads across both presets at D=1000, {bad} violations"),
    );
}

#[test]
fn criterion_08_hand_verified_triad() {
    let spec = DispersionSpec::sphere();
    let table = BetaTable::build(&spec, 14).unwrap();
    let family = solve_n_triple(&spec, &table, 12, 14, 13);
    let family_ok = family == Some(MFamily { rn: 5, rd: 4, kmax: 1 })
        && family.unwrap().members().collect::<Vec<_>>() == vec![(4, 5, 9)];

    let target = Triad::new(
        WaveVector::new(4, 12),
        WaveVector::new(5, 14),
        WaveVector::new(9, 13),
    );
    let mut missing = Vec::new();
    for domain in [14u32, 15, 20, 37, 50, 100] {
        if !enumerate(&spec, domain, 1).unwrap().triads.contains(&target) {
            missing.push(domain);
        }
    }
    if !sphere_1000().set.triads.contains(&target) {
        missing.push(1000);
    }
    report(
        8,
        family_ok && missing.is_empty(),
        &format!(
            "n-triple (12,14,13) gives {family:?}, expected ratio 5/4 with kmax=1; \
             domains missing the triad: {missing:?}"
        ),
    );
}

#[test]
fn criterion_09_ode_structure_against_goldens() {
    let golden_dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let mut diffs = Vec::new();
    for (fixture, golden) in [
        ("single_triad.json", "ode_isolated.txt"),
        ("butterfly.json", "ode_butterfly.txt"),
    ] {
        let out_dir = work_dir().join(format!("ode-{golden}"));
        let out = Command::new(bin())
            .args(["ode", "--in"])
            .arg(golden_dir.join(fixture))
            .arg("--out")
            .arg(&out_dir)
            .output()
            .expect("binary runs");
        assert!(out.status.success());
        let produced = fs::read_to_string(out_dir.join("component_0000.txt")).unwrap();
        let expected = fs::read_to_string(golden_dir.join(golden)).unwrap();
        if produced != expected {
            diffs.push(golden);
        }
    }
    let halved = fs::read_to_string(golden_dir.join("ode_butterfly.txt"))
        .unwrap()
        .contains("1/2*(");
    report(
        9,
        diffs.is_empty() && halved,
        &format!("golden mismatches: {diffs:?}; butterfly shared mode carries 1/2"),
    );
}

#[test]
fn criterion_10_worker_count_determinism() {
    let a = run_enumerate("sphere", 300, 1);
    let b = run_enumerate("sphere", 300, 8);
    let bytes_a = fs::read(&a.file).unwrap();
    let bytes_b = fs::read(&b.file).unwrap();
    report(
        10,
        bytes_a == bytes_b,
        &format!(
            "sphere D=300 with 1 and 8 workers: {} vs {} bytes, identical: {}",
            bytes_a.len(),
            bytes_b.len(),
            bytes_a == bytes_b
        ),
    );
}

// Not a numbered criterion: the qualitative claim that multiplicity 1
// dominates the sphere distribution at D = 1000.
#[test]
fn multiplicity_one_dominates_sphere_at_1000() {
    let hist = multiplicity_histogram(&sphere_1000().set);
    let ones = hist[&1];
    assert!(
        hist.iter().all(|(&m, &c)| m == 1 || c < ones),
        "multiplicity histogram {hist:?}"
    );
}
