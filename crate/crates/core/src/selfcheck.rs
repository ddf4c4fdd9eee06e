//! Source-level audit of the certificate re-verification path.
//!
//! `verify_certificate` must never touch binary64: its soundness argument
//! is exact arithmetic end to end. This module walks the source files of
//! every module reachable from the verifier and rejects float tokens and
//! imports of the float-bearing modules. The audit runs as a test and as
//! part of the acceptance suite.

/// Modules on the verifier path (crate-relative source files).
const VERIFIER_PATH_FILES: &[&str] = &[
    "src/lib.rs",
    "src/exact/mod.rs",
    "src/exact/rational.rs",
    "src/exact/linalg.rs",
    "src/poly.rs",
    "src/interval.rs",
    "src/taylor.rs",
    "src/zono.rs",
    "src/contain/witness.rs",
    "src/certify/problem.rs",
    "src/certify/certificate.rs",
    "src/certify/verifier.rs",
    "src/config.rs",
    "src/util.rs",
];

/// Float-bearing modules the verifier path must not import.
const FORBIDDEN_IMPORTS: &[&str] = &[
    "contain::lp",
    "contain::search",
    "exact::fromfloat",
    "certify::sim",
    "fromfloat::",
    "lp::",
    "search::",
    "sim::",
];

const FLOAT_TOKENS: &[&str] = &["f64", "f32"];

/// Strip line comments and `#[cfg(test)] mod ... { }` blocks so the audit
/// only sees code that ships in the library build.
fn strip_tests_and_comments(src: &str) -> String {
    let mut out = String::new();
    let mut skip_depth: Option<usize> = None;
    let mut depth: usize = 0;
    let mut pending_cfg_test = false;
    for line in src.lines() {
        let code = match line.find("//") {
            Some(idx) => &line[..idx],
            None => line,
        };
        let trimmed = code.trim();
        if skip_depth.is_none() {
            if trimmed.starts_with("#[cfg(test)]") {
                pending_cfg_test = true;
                continue;
            }
            if pending_cfg_test {
                // the item under the attribute (normally `mod tests {`)
                if trimmed.starts_with("mod ") || trimmed.starts_with("pub mod ") {
                    skip_depth = Some(depth);
                } else {
                    pending_cfg_test = false;
                }
            }
        }
        let opens = code.matches('{').count();
        let closes = code.matches('}').count();
        let was_skipping = skip_depth.is_some();
        depth = depth + opens - closes.min(depth + opens);
        if let Some(d) = skip_depth {
            if depth <= d {
                skip_depth = None;
                pending_cfg_test = false;
            }
            continue;
        }
        if !was_skipping {
            out.push_str(code);
            out.push('\n');
        }
    }
    out
}

fn is_ident_char(c: u8) -> bool {
    c.is_ascii_alphanumeric() || c == b'_'
}

fn contains_token(haystack: &str, token: &str) -> bool {
    let bytes = haystack.as_bytes();
    let t = token.as_bytes();
    let mut start = 0;
    while let Some(pos) = haystack[start..].find(token) {
        let at = start + pos;
        let before_ok = at == 0 || !is_ident_char(bytes[at - 1]);
        let after = at + t.len();
        let after_ok = after >= bytes.len() || !is_ident_char(bytes[after]);
        if before_ok && after_ok {
            return true;
        }
        start = at + 1;
    }
    false
}

/// Audit the verifier path. `core_dir` is the root of the core crate
/// (the directory containing `src/`). Returns the list of violations.
pub fn audit_verifier_path(core_dir: &std::path::Path) -> Vec<String> {
    let mut violations = Vec::new();
    for rel in VERIFIER_PATH_FILES {
        let path = core_dir.join(rel);
        let src = match std::fs::read_to_string(&path) {
            Ok(s) => s,
            Err(e) => {
                violations.push(format!("{rel}: unreadable ({e})"));
                continue;
            }
        };
        let code = strip_tests_and_comments(&src);
        for token in FLOAT_TOKENS {
            if contains_token(&code, token) {
                violations.push(format!("{rel}: float token {token:?} in library code"));
            }
        }
        for import in FORBIDDEN_IMPORTS {
            for line in code.lines() {
                let t = line.trim();
                if t.starts_with("use ") && t.contains(import) {
                    violations.push(format!("{rel}: forbidden import {t:?}"));
                }
            }
        }
    }
    violations
}

/// Convenience entry point used by tests inside this workspace.
pub fn audit_this_crate() -> Vec<String> {
    audit_verifier_path(std::path::Path::new(env!("CARGO_MANIFEST_DIR")))
}
