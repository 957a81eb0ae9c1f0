//! Parsing an input document and running a command through the library
//! front end, as the `torb` binary does.
//!
//!     cargo run --example input_documents

use torb::cli::{parse_document, run, Command};

fn main() {
    let doc = br#"{
        "torus_rank": 2,
        "product": [{"kind": "Delta", "n": 2}],
        "labels": {"F1": [1, 0], "F2": [0, 1], "F3": [-1, -1]}
    }"#;
    let doc = parse_document(doc).expect("valid document");
    let report = run(Command::All, &doc);
    print!("{}", report.text);
    println!("{}", serde_json::to_string_pretty(&report.to_json()["results"]["betti"]).unwrap());
}
