//! Helpers shared by the CLI test targets.

#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use cctrack_core::alpha::alpha_eq_term;
use cctrack_core::frontend::{parse_program, DeclKind};
use cctrack_core::Extensions;
use serde_json::Value;

pub fn examples_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples")
}

pub fn example(name: &str) -> PathBuf {
    examples_dir().join(name)
}

/// Every `.cc` file in the corpus, sorted by name.
pub fn corpus() -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = fs::read_dir(examples_dir())
        .expect("corpus directory")
        .map(|e| e.expect("directory entry").path())
        .filter(|p| p.extension().is_some_and(|e| e == "cc"))
        .collect();
    files.sort();
    files
}

pub fn cctrack(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cctrack"))
        .args(args)
        .output()
        .expect("cctrack runs")
}

pub fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

pub fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

/// `check --json` on a corpus file, parsed.
pub fn check_json(name: &str) -> (i32, Value) {
    let out = cctrack(&["check", "--json", example(name).to_str().unwrap()]);
    let json = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{name}: invalid JSON ({e}): {}", stdout(&out)));
    (out.status.code().unwrap_or(-1), json)
}

/// The `(name, type)` lines printed by `check`.
pub fn typings(name: &str) -> Vec<(String, String)> {
    let out = cctrack(&["check", example(name).to_str().unwrap()]);
    assert!(out.status.success(), "{name}: {}", stderr(&out));
    stdout(&out)
        .lines()
        .map(|l| {
            let (n, t) = l.split_once(" : ").expect("`name : type` line");
            (n.to_string(), t.to_string())
        })
        .collect()
}

pub fn typing_of(name: &str, def: &str) -> Option<String> {
    typings(name)
        .into_iter()
        .find(|(n, _)| n == def)
        .map(|(_, t)| t)
}

/// Parses, prints, parses again and prints again. The two parses must give
/// the same declarations up to renaming of bound variables, and the two
/// printouts must be identical.
pub fn round_trip(src: &str) -> Result<(), String> {
    let first = parse_program(src, Extensions::none()).map_err(|e| format!("parse: {e}"))?;
    let printed = first.print();
    let second = parse_program(&printed, Extensions::none())
        .map_err(|e| format!("reparse: {e}\n{printed}"))?;
    if first.decls.len() != second.decls.len() {
        return Err("declaration count changed".into());
    }
    for (a, b) in first.decls.iter().zip(&second.decls) {
        let same = match (&a.kind, &b.kind) {
            (DeclKind::Def(x, s), DeclKind::Def(y, t)) => x == y && alpha_eq_term(s, t),
            (DeclKind::Main(s), DeclKind::Main(t)) => alpha_eq_term(s, t),
            (k1, k2) => k1 == k2,
        };
        if !same {
            return Err(format!(
                "declaration changed: {:?} became {:?}",
                a.kind, b.kind
            ));
        }
    }
    if first.pragma != second.pragma {
        return Err("extension line changed".into());
    }
    let again = second.print();
    if again != printed {
        return Err(format!("printing is not stable:\n{printed}\n---\n{again}"));
    }
    Ok(())
}

pub fn schema() -> jsonschema::JSONSchema {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/check.schema.json");
    let text = fs::read_to_string(path).expect("shipped schema");
    let value: Value = serde_json::from_str(&text).expect("schema is JSON");
    jsonschema::JSONSchema::compile(&value).expect("schema compiles")
}

/// Validation errors of `instance`, rendered.
pub fn schema_errors(schema: &jsonschema::JSONSchema, instance: &Value) -> Vec<String> {
    match schema.validate(instance) {
        Ok(()) => Vec::new(),
        Err(errors) => errors
            .map(|e| format!("{} at {}", e, e.instance_path))
            .collect(),
    }
}
