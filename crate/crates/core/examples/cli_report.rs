//! Drive the command-line front end in-process: write two form files, run
//! `analyze`, and print part of the report.
//!
//! The same report comes from
//! `bihermitian analyze --h1 h1.json --h2 h2.json --out report.json`.

use bihermitian::cli::{run_command, write_form_file};
use bihermitian::linalg::diag;

fn main() -> std::io::Result<()> {
    let dir = std::env::temp_dir().join(format!("bihermitian-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let h1 = dir.join("h1.json");
    let h2 = dir.join("h2.json");
    let out = dir.join("report.json");
    write_form_file(&h1, &diag(&[1.0, 1.0, 2.0]))?;
    write_form_file(&h2, &diag(&[3.0, 3.0, 2.0]))?;

    let argv = [
        "bihermitian",
        "analyze",
        "--h1",
        h1.to_str().unwrap(),
        "--h2",
        h2.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ];
    let code = run_command(argv);
    println!("exit code {code}");

    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out)?)?;
    println!("genericity: {}", report["genericity"]);
    println!("group blocks: {}", report["biunitary_group"]["block_sizes"]);
    std::fs::remove_dir_all(&dir)
}
