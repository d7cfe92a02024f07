use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use menuopt_core::analytics::{nutrition_rank, NutritionPopulation, SensoryDimension, Side};
use menuopt_core::domain::load_nutrition;
use serde_json::Value;

fn menuopt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_menuopt"))
        .args(args)
        .env_remove("LLM_API_KEY")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> Output {
    let out = menuopt(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn loose_limits_without_diversity_pick_the_top_rated() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    ok(&["score", "--out-dir", out]);
    ok(&[
        "optimize",
        "--lambda",
        "0",
        "--c-emissions",
        "100",
        "--c-welfare",
        "100",
        "--out-dir",
        out,
    ]);
    let scores: BTreeMap<String, f64> = serde_json::from_value(read_json(&dir.path().join("scores.json"))).unwrap();
    let solution = read_json(&dir.path().join("solution.json"));
    assert_eq!(solution["certificate"], "exact");
    let chosen: Vec<&str> = solution["selection"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect();
    assert_eq!(chosen.len(), 36);
    let worst_in = chosen.iter().map(|id| scores[*id]).fold(f64::INFINITY, f64::min);
    let best_out = scores
        .iter()
        .filter(|(id, _)| !chosen.contains(&id.as_str()))
        .map(|(_, &r)| r)
        .fold(f64::NEG_INFINITY, f64::max);
    assert!(worst_in >= best_out, "{worst_in} < {best_out}");
    let expected: f64 = chosen.iter().map(|id| scores[*id] / 10.0).sum();
    assert!((solution["objective"].as_f64().unwrap() - expected).abs() < 1e-9);
}

#[test]
fn zero_emissions_limit_is_reported_infeasible() {
    let dir = tempfile::tempdir().unwrap();
    let out = menuopt(&[
        "optimize",
        "--c-emissions",
        "0",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("no feasible menu"), "{}", stderr(&out));
    assert!(!dir.path().join("solution.json").exists());
}

#[test]
fn optimized_menu_lists_generated_items_first() {
    let dir = tempfile::tempdir().unwrap();
    ok(&[
        "optimize",
        "--exact-budget",
        "1000",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    let menu = read_json(&dir.path().join("menu.json"));
    let ids: Vec<&str> = menu
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["id"].as_str().unwrap())
        .collect();
    let first_original = ids.iter().position(|id| id.starts_with('o')).unwrap();
    assert!(ids[first_original..].iter().all(|id| id.starts_with('o')));
    let report = fs::read_to_string(dir.path().join("report.txt")).unwrap();
    assert!(report.contains("certificate: heuristic"));
}

const ITEMS: &str = "product_id,serving_size_g,fat_g,protein_g,sugar_g,sodium_mg
a1,100,10,5,3,400
a2,150,4,12,9,120
b1,80,2,7,15,50
b2,120,18,3,1,700
c1,200,7,20,6,300
c2,90,1,2,22,90
";

fn write_eval_inputs(dir: &Path, pairs: &str) -> (String, String) {
    let items = dir.join("items.csv");
    let pairs_path = dir.join("pairs.csv");
    fs::write(&items, ITEMS).unwrap();
    fs::write(&pairs_path, pairs).unwrap();
    (items.to_str().unwrap().into(), pairs_path.to_str().unwrap().into())
}

#[test]
fn malformed_pairs_file_fails_with_line_number() {
    let dir = tempfile::tempdir().unwrap();
    let (items, pairs) = write_eval_inputs(dir.path(), "id_a,id_b,truth,gap\na1,a2,a,1.0\nb1,b2,maybe,1.0\n");
    let out = menuopt(&[
        "eval-pairs",
        "--pairs",
        &pairs,
        "--items",
        &items,
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("line 3"), "{}", stderr(&out));

    let (items, pairs) = write_eval_inputs(dir.path(), "id_a,id_b,truth,gap\na1,zz,a,1.0\n");
    let out = menuopt(&["eval-pairs", "--pairs", &pairs, "--items", &items]);
    assert!(stderr(&out).contains("unknown item `zz`"), "{}", stderr(&out));
}

#[test]
fn nutrition_predictions_match_the_ranking_rule() {
    let dir = tempfile::tempdir().unwrap();
    let (items, pairs) = write_eval_inputs(
        dir.path(),
        "id_a,id_b,truth,gap\na1,a2,a,1.5\nb1,b2,b,0.5\nc1,c2,a,2.0\na1,c2,b,1.0\nb2,c1,a,3.0\n",
    );
    for dim in SensoryDimension::ALL {
        let name = dim.name();
        let out_dir = dir.path().join(name);
        ok(&[
            "eval-pairs",
            "--pairs",
            &pairs,
            "--items",
            &items,
            "--dimension",
            name,
            "--seed",
            "3",
            "--out-dir",
            out_dir.to_str().unwrap(),
        ]);
        let report = read_json(&out_dir.join("eval_report.json"));
        let facts = load_nutrition(Path::new(&items)).unwrap();
        let population = NutritionPopulation::new(facts.values());
        for o in report["outcomes"].as_array().unwrap() {
            let (a, b) = (o["id_a"].as_str().unwrap(), o["id_b"].as_str().unwrap());
            let (fa, fb) = (&facts[a], &facts[b]);
            let forward = nutrition_rank(dim, fa, fb, Some(&population)).unwrap();
            let backward = nutrition_rank(dim, fb, fa, Some(&population)).unwrap();
            // Exact ties go to whichever item was shown first; skip those.
            if (forward == Side::A) != (backward == Side::B) {
                continue;
            }
            assert_eq!(o["prediction"], forward.as_str(), "{name}: {a} vs {b}");
        }
    }
}

#[test]
fn bound_check_writes_a_passing_report() {
    let dir = tempfile::tempdir().unwrap();
    ok(&[
        "verify-bound",
        "--trials",
        "50",
        "--epsilon",
        "0.2",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    let report = read_json(&dir.path().join("bound_report.json"));
    assert_eq!(report["pass"], true);
    assert_eq!(report["trials"], 50);
    assert!(report["max_gap"].as_f64().unwrap() <= 2.0 + 1e-9);
}

#[test]
fn vegetarian_subset_transform() {
    let dir = tempfile::tempdir().unwrap();
    ok(&[
        "transform",
        "--transform",
        "vegetarian-subset",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    let menu = read_json(&dir.path().join("vegetarian_subset.json"));
    assert_eq!(menu.as_array().unwrap().len(), 17);
}

#[test]
fn remote_backend_needs_a_key_or_transcript() {
    let dir = tempfile::tempdir().unwrap();
    let out = menuopt(&[
        "generate",
        "--backend",
        "remote",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("LLM_API_KEY"), "{}", stderr(&out));
}

#[test]
fn config_file_is_applied_and_checked() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(
        &cfg,
        "k = 30\nlambda = 0.0\nc_emissions = 100.0\nc_welfare = 100.0\nout_dir = \"results\"\n",
    )
    .unwrap();
    ok(&["optimize", "--config", cfg.to_str().unwrap()]);
    let solution = read_json(&dir.path().join("results/solution.json"));
    assert_eq!(solution["selection"].as_array().unwrap().len(), 30);
    assert_eq!(solution["parameters"]["k"], 30);

    fs::write(&cfg, "k = 30\nlamda = 1.0\n").unwrap();
    let out = menuopt(&["optimize", "--config", cfg.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("lamda"), "{}", stderr(&out));
}
