//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use std::path::{Path, PathBuf};
use std::process::{Child, Command, Stdio};
use std::time::{Duration, Instant};

use archsteer_core::evaluation::{mva, system_reliability, ObjectiveVector};
use archsteer_core::fixtures;
use archsteer_core::indicators::{
    a12, coverage, entropy_tradeoff, epsilon, hypervolume, igd_plus, magnitude, mann_whitney_u, nadir,
    Magnitude, Normalizer,
};
use archsteer_core::interaction::{cluster_front, k_medoids, ClusterConfig, SessionTree};
use archsteer_core::model::{derive_demands, load_model, ArchitectureModel};
use archsteer_core::optimizer::{dominates_min, fast_nondominated_sort, segment_plan, RunArchive, Segment};
use archsteer_core::refactoring::RefactoringAction;
use archsteer_oracles as oracle;
use archsteer_service::experiment::{experiment_runs, ExperimentOptions, Scale};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

type Check = Result<String, String>;
type Front = Vec<Vec<f64>>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within_budget(t0: Instant, seconds: u64) -> Result<(), String> {
    let s = t0.elapsed().as_secs_f64();
    ensure(s < seconds as f64, || format!("took {s:.1}s, budget {seconds}s"))
}

fn random_model(rng: &mut ChaCha8Rng) -> ArchitectureModel {
    let doc = oracle::random_model_document(rng);
    load_model(&serde_json::to_vec(&doc).unwrap()).unwrap()
}

fn hotspot() -> ArchitectureModel {
    fixtures::load("hotspot").unwrap().unwrap()
}

fn indicator_oracles() -> Check {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let cases: Vec<(Front, Front)> = (0..200)
        .map(|i| {
            let d = 2 + i % 3;
            (oracle::random_front(&mut rng, d, 10), oracle::random_front(&mut rng, d, 10))
        })
        .collect();
    for (i, (a, b)) in cases.iter().enumerate() {
        let pairs = [
            ("igd+", igd_plus(a, b).unwrap(), oracle::igd_plus(a, b)),
            ("eps", epsilon(a, b).unwrap(), oracle::epsilon(a, b)),
            ("C", coverage(a, b).unwrap(), oracle::coverage(a, b)),
        ];
        for (name, got, want) in pairs {
            ensure((got - want).abs() <= 1e-12, || format!("front {i}: {name} {got} vs {want}"))?;
        }
    }
    let threads = std::thread::available_parallelism().map_or(4, |n| n.get());
    let worst = std::thread::scope(|s| {
        let handles: Vec<_> = (0..threads)
            .map(|t| {
                let cases = &cases;
                s.spawn(move || {
                    let mut worst: (f64, usize) = (0.0, 0);
                    for i in (t..cases.len()).step_by(threads) {
                        let f = &cases[i].0;
                        let r = nadir(f).unwrap();
                        let hv = hypervolume(f, &r).unwrap().volume;
                        let mc = oracle::monte_carlo_hypervolume(f, &r, 1_000_000, i as u64);
                        let rel = (hv - mc).abs() / mc;
                        if rel > worst.0 {
                            worst = (rel, i);
                        }
                    }
                    worst
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap())
            .fold((0.0, 0), |a, b| if b.0 > a.0 { b } else { a })
    });
    ensure(worst.0 <= 0.005, || format!("HV off by {:.3}% on front {}", 100.0 * worst.0, worst.1))?;
    within_budget(t0, 60)?;
    Ok(format!(
        "200 fronts, worst HV deviation {:.3}%, distances exact, {:.1}s",
        100.0 * worst.0,
        t0.elapsed().as_secs_f64()
    ))
}

fn mva_correctness() -> Check {
    let t0 = Instant::now();
    let mut worst: f64 = 0.0;
    for n in 1..=50u32 {
        for d in [0.003, 0.25, 1.0, 7.5] {
            let r = mva(&[d], n, 0.0).unwrap().response_time;
            worst = worst.max((r - n as f64 * d).abs());
        }
    }
    ensure(worst <= 1e-12, || format!("closed form off by {worst:e}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut scenarios = 0;
    for m in 0..1000 {
        let model = random_model(&mut rng);
        for (s, d) in model.scenarios.iter().zip(derive_demands(&model)) {
            let sol = mva(&d.per_node, s.population, s.think_time).unwrap();
            let d_max = d.per_node.iter().cloned().fold(0.0, f64::max);
            let total: f64 = d.per_node.iter().sum();
            let x = sol.throughput;
            ensure(x <= (1.0 + 1e-9) / d_max, || format!("model {m}: X above the bottleneck bound"))?;
            ensure(x <= (1.0 + 1e-9) * s.population as f64 / (s.think_time + total), || {
                format!("model {m}: X above the population bound")
            })?;
            ensure(sol.response_time >= total * (1.0 - 1e-12), || format!("model {m}: R below total demand"))?;
            scenarios += 1;
        }
    }
    within_budget(t0, 10)?;
    Ok(format!(
        "R(N)=N*D within {worst:e}; bounds hold on 1000 models ({scenarios} scenarios), {:.1}s",
        t0.elapsed().as_secs_f64()
    ))
}

fn reliability() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5150);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let doc = oracle::random_model_document(&mut rng);
        let model = load_model(&serde_json::to_vec(&doc).unwrap()).unwrap();
        let got = system_reliability(&model).theta_s;
        worst = worst.max((got - oracle::reliability_by_enumeration(&doc)).abs());
    }
    ensure(worst <= 1e-12, || format!("max deviation {worst:e}"))?;
    Ok(format!("100 models, max deviation {worst:e}"))
}

fn check_run(run: &RunArchive, prefix: &[RefactoringAction]) -> Result<(), String> {
    let front: Vec<[f64; 4]> = run.final_front.iter().map(|&i| run.entries[i].objectives.to_min()).collect();
    for a in &front {
        for b in &front {
            ensure(!dominates_min(a, b), || "final front has a dominated member".into())?;
        }
    }
    ensure(run.frozen_prefix_len == prefix.len(), || "prefix length not recorded".into())?;
    for g in &run.generations {
        for &e in &g.population {
            let c = &run.entries[e].chromosome;
            ensure(c.len() >= prefix.len() && &c[..prefix.len()] == prefix, || {
                format!("generation {}: frozen prefix changed", g.generation)
            })?;
        }
    }
    let feasible: Vec<ObjectiveVector> = run.entries.iter().filter(|e| e.feasible).map(|e| e.objectives).collect();
    let norm = Normalizer::from_reference(&feasible).map_err(|e| e.to_string())?;
    let pts: Vec<[f64; 4]> = feasible.iter().map(|v| norm.apply(v)).collect();
    let r = nadir(&pts).unwrap();
    let mut last = 0.0;
    for g in 0..=run.last_generation() {
        let f = norm.front(&run.objectives_of(&run.archive_front_at(g)));
        let hv = hypervolume(&f.points, &r).unwrap().volume;
        ensure(hv >= last - 1e-12, || format!("archive HV fell at generation {g}"))?;
        last = hv;
    }
    Ok(())
}

fn nsga_invariants(runs: &ArchiveSet) -> Check {
    let mut count = 0;
    let mut individuals = 0;
    let named = runs
        .reference
        .iter()
        .map(|a| ("reference", a, Vec::new()))
        .chain(runs.baseline.iter().map(|a| ("baseline", a, Vec::new())));
    let tree_points = runs.trees.iter().flat_map(|t| {
        t.points
            .iter()
            .filter_map(|p| p.archive.as_ref().map(|a| ("interactive", a, p.frozen_prefix.clone())))
    });
    for (name, run, prefix) in named.chain(tree_points) {
        check_run(run, &prefix).map_err(|e| format!("{name} run {}: {e}", run.stream))?;
        individuals += run.generations.iter().map(|g| g.population.len()).sum::<usize>();
        count += 1;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for case in 0..100 {
        let n = rng.random_range(1..=64);
        let pts: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..4).map(|_| rng.random_range(0..6) as f64).collect())
            .collect();
        let mut ours = fast_nondominated_sort(&pts);
        let mut theirs = oracle::peel_fronts(&pts);
        for f in ours.iter_mut().chain(theirs.iter_mut()) {
            f.sort_unstable();
        }
        ensure(ours == theirs, || format!("sort disagrees on population {case}"))?;
    }
    Ok(format!(
        "{count} desk runs ({individuals} individuals checked), 100 sorts agree"
    ))
}

fn segment_arithmetic() -> Check {
    let a = segment_plan(100, 8, 3).map_err(|e| e.to_string())?;
    let b = segment_plan(100, 4, 1).map_err(|e| e.to_string())?;
    let seg = |iterations, genes| Segment { iterations, genes };
    ensure(a == vec![seg(25, 2); 4], || format!("(100, 8, 3) gave {a:?}"))?;
    ensure(b == vec![seg(50, 2); 2], || format!("(100, 4, 1) gave {b:?}"))?;
    ensure(segment_plan(100, 6, 3).is_err(), || "(100, 6, 3) accepted".into())?;
    Ok("(100,8,3) -> 4x(25,2); (100,4,1) -> 2x(50,2)".into())
}

fn check_clusters(front: &[ObjectiveVector], cs: &archsteer_core::interaction::ClusterSet) -> Result<(), String> {
    let raw: Vec<Vec<f64>> = front.iter().map(|v| v.as_array().to_vec()).collect();
    let pts = oracle::standardize(&raw);
    let d = |a: usize, b: usize| oracle::euclid(&pts[a], &pts[b]);
    ensure(oracle::medoids_optimal(d, &cs.assignments, &cs.medoids), || "medoid not optimal".into())?;
    ensure((-1.0..=1.0).contains(&cs.silhouette), || format!("silhouette {}", cs.silhouette))?;
    if cs.k >= 2 {
        let want = oracle::silhouette(&pts, &cs.assignments);
        ensure((cs.silhouette - want).abs() < 1e-9, || format!("silhouette {} vs {want}", cs.silhouette))?;
    }
    Ok(())
}

fn clustering(runs: &ArchiveSet) -> Check {
    let mut fronts = 0;
    for t in &runs.trees {
        for p in &t.points {
            if let (Some(a), Some(cs)) = (&p.archive, &p.clusters) {
                check_clusters(&a.objectives_of(&p.clustered), cs).map_err(|e| format!("tree point {}: {e}", p.id))?;
                fronts += 1;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for case in 0..200 {
        let n = rng.random_range(3..30);
        let front: Vec<ObjectiveVector> = (0..n)
            .map(|_| {
                ObjectiveVector::new(
                    rng.random_range(-1.0..1.0),
                    rng.random_range(0.9..1.0),
                    rng.random_range(0.0..40.0),
                    rng.random_range(0..6),
                )
            })
            .collect();
        let cs = cluster_front(&front, &ClusterConfig { seed: case, ..Default::default() });
        check_clusters(&front, &cs).map_err(|e| format!("random front {case}: {e}"))?;
        fronts += 1;
    }
    let line = [0.0, 1.0, 10.0, 11.0];
    let dist: Vec<Vec<f64>> = line.iter().map(|a| line.iter().map(|b| f64::abs(a - b)).collect()).collect();
    let (assign, _) = k_medoids(&dist, 2, 0);
    ensure(assign[0] == assign[1] && assign[2] == assign[3] && assign[0] != assign[2], || {
        format!("1D split {assign:?}")
    })?;
    Ok(format!("{fronts} clustered fronts optimal, 1D case splits {{0,1}}/{{10,11}}"))
}

fn statistics() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut cases = 0;
    for na in 1..=8 {
        for nb in 1..=8 {
            for _ in 0..6 {
                let a: Vec<f64> = (0..na).map(|_| rng.random_range(0..7) as f64).collect();
                let b: Vec<f64> = (0..nb).map(|_| rng.random_range(0..7) as f64).collect();
                let got = mann_whitney_u(&a, &b).map_err(|e| e.to_string())?;
                let want = oracle::mann_whitney_enumerated(&a, &b);
                ensure(got.exact && (got.p_value - want).abs() < 1e-12, || {
                    format!("{a:?} vs {b:?}: p {} vs {want}", got.p_value)
                })?;
                cases += 1;
            }
        }
    }
    let x = a12(&[1.0, 2.0], &[1.0, 3.0]).unwrap();
    ensure(x == 0.375, || format!("A12 = {x}"))?;
    let table = [
        (0.1469, Magnitude::Negligible),
        (0.1471, Magnitude::Small),
        (0.3299, Magnitude::Small),
        (0.3301, Magnitude::Medium),
        (0.4739, Magnitude::Medium),
        (0.4741, Magnitude::Large),
    ];
    for (delta, want) in table {
        for a in [0.5 + delta / 2.0, 0.5 - delta / 2.0] {
            ensure(magnitude(a) == want, || format!("A12 {a}: {:?}, want {want:?}", magnitude(a)))?;
        }
    }
    ensure(magnitude(0.5) == Magnitude::Negligible, || "A12 0.5 not negligible".into())?;
    Ok(format!(
        "{cases} exact p-values match enumeration; A12 = 0.375; thresholds on |2(A12-0.5)|"
    ))
}

fn entropy_endpoints() -> Check {
    let v = |levels: [u32; 4]| {
        ObjectiveVector::new(levels[0] as f64, levels[1] as f64 / 4.0, levels[2] as f64, levels[3])
    };
    let single = vec![v([1, 2, 3, 1]); 7];
    let mut all = Vec::new();
    let mut quarter = Vec::new();
    for a in 0..5 {
        for b in 0..5 {
            quarter.push(v([a, b, 0, 0]));
            for c in 0..5 {
                for d in 0..5 {
                    all.push(v([a, b, c, d]));
                }
            }
        }
    }
    let h = [&single, &all, &quarter].map(|f| entropy_tradeoff(f).unwrap());
    ensure(h[0].abs() <= 1e-12, || format!("single bin {}", h[0]))?;
    ensure((h[1] - 1.0).abs() <= 1e-12, || format!("uniform 625 {}", h[1]))?;
    ensure((h[2] - 0.5).abs() <= 1e-12, || format!("uniform 25 {}", h[2]))?;
    Ok(format!("{} / {} / {}", h[0], h[1], h[2]))
}

struct ArchiveSet {
    reference: Vec<RunArchive>,
    baseline: Vec<RunArchive>,
    trees: Vec<SessionTree>,
}

fn desk_archives() -> Result<ArchiveSet, String> {
    let runs = experiment_runs(&hotspot(), &ExperimentOptions::new(Scale::Desk, 42)).map_err(|e| e.to_string())?;
    let all = |v: Vec<archsteer_core::Result<RunArchive>>| v.into_iter().collect::<Result<Vec<_>, _>>();
    Ok(ArchiveSet {
        reference: all(runs.reference).map_err(|e| e.to_string())?,
        baseline: all(runs.baseline).map_err(|e| e.to_string())?,
        trees: runs
            .interactive
            .into_iter()
            .map(|r| r.map(|(t, _)| t))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?,
    })
}

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_archsteer")
}

fn run_desk(out: &Path) -> Result<(), String> {
    let status = Command::new(bin())
        .args(["experiment", "--model", "hotspot", "--scale", "desk", "--seed", "42", "--out"])
        .arg(out)
        .stderr(Stdio::null())
        .status()
        .map_err(|e| e.to_string())?;
    ensure(status.success(), || format!("experiment exited with {status}"))
}

fn column(rows: &[csv::StringRecord], experiment: &str, col: usize) -> Vec<f64> {
    rows.iter()
        .filter(|r| &r[0] == experiment)
        .map(|r| r[col].parse().unwrap())
        .collect()
}

fn median(v: &[f64]) -> f64 {
    let mut v = v.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

fn desk_replication(out: &Path, elapsed: Duration) -> Check {
    let mut reader = csv::Reader::from_path(out.join("runs.csv")).map_err(|e| e.to_string())?;
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    let col = |name: &str| header.iter().position(|h| h == name).unwrap();
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    let base = "baseline-60";
    let (nps, hv, tc) = (col("nps"), col("hv"), col("tree_coverage"));
    let base_nps = median(&column(&rows, base, nps));
    let base_hv = column(&rows, base, hv);
    let base_tc = median(&column(&rows, base, tc));
    ensure(base_hv.len() == 10, || format!("baseline has {} runs", base_hv.len()))?;
    let mut notes = Vec::new();
    let mut failures = Vec::new();
    for policy in ["best-perfq", "best-reliability"] {
        let name = format!("interactive-{policy}");
        let i_nps = median(&column(&rows, &name, nps));
        let i_hv = column(&rows, &name, hv);
        let share = base_hv.iter().zip(&i_hv).filter(|(b, i)| b >= i).count() as f64 / base_hv.len() as f64;
        let i_tc = median(&column(&rows, &name, tc));
        notes.push(format!(
            "{policy}: NPS {i_nps} vs {base_nps}, HV share {:.0}%, tree coverage {i_tc:.4} vs {base_tc:.4}",
            100.0 * share
        ));
        if !(i_nps < base_nps && share >= 0.7 && base_tc > i_tc) {
            failures.push(policy);
        }
    }
    ensure(elapsed < Duration::from_secs(900), || format!("took {elapsed:?}"))?;
    let detail = notes.join("; ");
    if failures.is_empty() {
        Ok(format!("{detail}; {:.1}s", elapsed.as_secs_f64()))
    } else {
        Err(format!("{failures:?} missed: {detail}"))
    }
}

fn free_port() -> u16 {
    std::net::TcpListener::bind("127.0.0.1:0").unwrap().local_addr().unwrap().port()
}

struct Server {
    child: Child,
    base: String,
    agent: ureq::Agent,
}

impl Server {
    fn start(data: &Path) -> Result<Self, String> {
        let port = free_port();
        let child = Command::new(bin())
            .args(["serve", "--workers", "2", "--port", &port.to_string(), "--data-dir"])
            .arg(data)
            .stdout(Stdio::null())
            .stderr(Stdio::null())
            .spawn()
            .map_err(|e| e.to_string())?;
        let agent: ureq::Agent = ureq::Agent::config_builder()
            .http_status_as_error(false)
            .build()
            .into();
        let mut s = Server {
            child,
            base: format!("http://127.0.0.1:{port}"),
            agent,
        };
        let t0 = Instant::now();
        while s.get("/healthz").is_err() {
            if t0.elapsed() > Duration::from_secs(20) {
                s.kill();
                return Err("service did not come up".into());
            }
            std::thread::sleep(Duration::from_millis(50));
        }
        Ok(s)
    }

    fn get(&self, path: &str) -> Result<(u16, Value), String> {
        let mut r = self.agent.get(format!("{}{path}", self.base)).call().map_err(|e| e.to_string())?;
        let text = r.body_mut().read_to_string().map_err(|e| e.to_string())?;
        Ok((r.status().as_u16(), serde_json::from_str(&text).unwrap_or(Value::Null)))
    }

    fn post(&self, path: &str, body: &Value) -> Result<(u16, Value), String> {
        let mut r = self
            .agent
            .post(format!("{}{path}", self.base))
            .header("content-type", "application/json")
            .send(body.to_string())
            .map_err(|e| e.to_string())?;
        let text = r.body_mut().read_to_string().map_err(|e| e.to_string())?;
        Ok((r.status().as_u16(), serde_json::from_str(&text).unwrap_or(Value::Null)))
    }

    fn wait(&self, sid: &str, nid: usize, until: impl Fn(&Value) -> bool) -> Result<Value, String> {
        let t0 = Instant::now();
        loop {
            let (_, v) = self.get(&format!("/sessions/{sid}/nodes/{nid}"))?;
            if until(&v) {
                return Ok(v);
            }
            if v["status"] == "failed" || t0.elapsed() > Duration::from_secs(120) {
                return Err(format!("node {nid} of {sid}: {v}"));
            }
            std::thread::sleep(Duration::from_millis(25));
        }
    }

    fn kill(&mut self) {
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}

impl Drop for Server {
    fn drop(&mut self) {
        self.kill();
    }
}

fn model_doc(name: &str) -> Value {
    serde_json::from_str(fixtures::ALL.iter().find(|(n, _)| *n == name).unwrap().1).unwrap()
}

fn kill_and_resume(data: &Path) -> Result<String, String> {
    let done = |v: &Value| v["status"] == "done";
    let mut first = Server::start(data)?;
    let small = json!({
        "model": model_doc("ttbs"),
        "config": { "search": { "population_size": 8, "iterations": 16, "chromosome_length": 4, "interactions": 1 } },
        "seed": 3,
    });
    let (s, v) = first.post("/sessions", &small)?;
    ensure(s == 201, || format!("create gave {s}: {v}"))?;
    let a = v["id"].as_str().unwrap().to_string();
    first.wait(&a, 0, done)?;
    let (s, v) = first.post(&format!("/sessions/{a}/nodes/0/choose"), &json!({ "cluster": 0 }))?;
    ensure(s == 202, || format!("choose gave {s}: {v}"))?;
    first.wait(&a, 1, done)?;
    let snapshot: Vec<Value> = ["/nodes/0", "/nodes/1", "/tree"]
        .iter()
        .map(|p| first.get(&format!("/sessions/{a}{p}")).map(|r| r.1))
        .collect::<Result<_, _>>()?;

    let long = json!({
        "model": model_doc("cocome"),
        "config": { "search": { "population_size": 16, "iterations": 400000, "chromosome_length": 4, "interactions": 1 } },
    });
    let (s, v) = first.post("/sessions", &long)?;
    ensure(s == 201, || format!("create gave {s}: {v}"))?;
    let b = v["id"].as_str().unwrap().to_string();
    first.wait(&b, 0, |v| v["status"] == "running" && v["generation"].as_u64() > Some(0))?;
    first.kill();

    for entry in std::fs::read_dir(data).map_err(|e| e.to_string())? {
        let p: PathBuf = entry.map_err(|e| e.to_string())?.path();
        if p.extension().is_some_and(|x| x == "json") && !p.file_name().unwrap().to_string_lossy().starts_with('.') {
            let bytes = std::fs::read(&p).map_err(|e| e.to_string())?;
            serde_json::from_slice::<Value>(&bytes).map_err(|e| format!("{} corrupt: {e}", p.display()))?;
        }
    }

    let second = Server::start(data)?;
    for (p, before) in ["/nodes/0", "/nodes/1", "/tree"].iter().zip(&snapshot) {
        let (_, after) = second.get(&format!("/sessions/{a}{p}"))?;
        ensure(&after == before, || format!("finished session changed at {p}"))?;
    }
    let (_, v) = second.get(&format!("/sessions/{b}/nodes/0"))?;
    ensure(v["status"] == "failed" && v["error"] == "interrupted", || format!("in-flight root is {v}"))?;
    let (_, t) = second.get(&format!("/sessions/{b}/tree"))?;
    ensure(t["nodes"].as_array().map(Vec::len) == Some(1), || "interrupted session grew".into())?;
    Ok("finished nodes identical after restart, only the in-flight node failed".into())
}

fn determinism(a: &Path, b: &Path, data: &Path) -> Check {
    for f in ["report.json", "runs.csv", "comparisons.csv"] {
        let (x, y) = (std::fs::read(a.join(f)), std::fs::read(b.join(f)));
        ensure(matches!((&x, &y), (Ok(x), Ok(y)) if x == y), || format!("{f} differs between runs"))?;
    }
    let resume = kill_and_resume(data)?;
    Ok(format!("two --seed 42 reports byte-identical; {resume}"))
}

fn main() {
    let tmp = tempfile::tempdir().unwrap();
    let (out_a, out_b, data) = (tmp.path().join("a"), tmp.path().join("b"), tmp.path().join("data"));

    let t0 = Instant::now();
    let desk = run_desk(&out_a);
    let desk_time = t0.elapsed();
    let desk_again = desk.clone().and_then(|_| run_desk(&out_b));
    let archives = desk_archives();

    let results: Vec<(&str, Check)> = vec![
        ("indicator oracle suite", indicator_oracles()),
        ("MVA correctness", mva_correctness()),
        ("reliability formula", reliability()),
        ("NSGA-II invariants", archives.as_ref().map_err(Clone::clone).and_then(nsga_invariants)),
        ("segment arithmetic", segment_arithmetic()),
        ("clustering", archives.as_ref().map_err(Clone::clone).and_then(clustering)),
        ("desk-scale replication", desk.clone().and_then(|_| desk_replication(&out_a, desk_time))),
        ("statistics", statistics()),
        ("determinism", desk_again.and_then(|_| determinism(&out_a, &out_b, &data))),
        ("entropy endpoints", entropy_endpoints()),
    ];

    let mut failed = 0;
    for (name, r) in &results {
        match r {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why}");
            }
        }
    }
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
