//! Builds a scenario in code, writes it as JSON and runs the command-line
//! front end on it.
//!
//!     cargo run --example scenario_cli

use chow_orbits::cli::presets::preset;
use chow_orbits::cli::run_args;
use chow_orbits::cli::scenario::parse_scenario;

fn main() {
    let mut s = preset("cor-translation").unwrap();
    s.options.word = Some("t1^4".into());
    s.options.seed = Some(42);
    let text = s.to_json_string();
    println!("{text}\n");
    assert_eq!(parse_scenario(text.as_bytes()).unwrap(), s);

    let dir = std::env::temp_dir().join(format!("chow-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("scenario.json");
    std::fs::write(&path, &text).unwrap();
    let path = path.to_str().unwrap();

    for args in [
        vec!["chow", "split", path],
        vec!["chow", "normalize", path],
        vec!["chow", "orbit-span", path],
        vec!["chow", "--json", "demo-step3", path],
    ] {
        let out = run_args(&args);
        println!("$ {}  (exit {})", args.join(" "), out.code);
        print!("{}{}", out.stdout, out.stderr);
        println!();
    }
    std::fs::remove_dir_all(&dir).ok();
}
