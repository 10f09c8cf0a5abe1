//! Human-readable text, derived only from the JSON report.

use serde_json::Value;
use std::fmt::Write;

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        Value::Array(a) => format!("[{}]", a.iter().map(scalar).collect::<Vec<_>>().join(", ")),
        other => other.to_string(),
    }
}

fn write_value(out: &mut String, key: &str, v: &Value, indent: usize) {
    let pad = " ".repeat(indent);
    match v {
        Value::Object(m) if m.is_empty() => writeln!(out, "{pad}{key}: {{}}").unwrap(),
        Value::Object(m) if m.len() > 8 && m.values().all(|x| x.is_number() || x.is_string()) => {
            let items: Vec<String> = m.iter().map(|(k, x)| format!("{k}: {}", scalar(x))).collect();
            writeln!(out, "{pad}{key}: {{{}}}", items.join(", ")).unwrap();
        }
        Value::Object(m) => {
            writeln!(out, "{pad}{key}:").unwrap();
            for (k, x) in m {
                write_value(out, k, x, indent + 2);
            }
        }
        Value::Array(a) if a.iter().any(|x| x.is_object() || x.is_array() && x.as_array().is_some_and(|y| y.iter().any(Value::is_array))) => {
            writeln!(out, "{pad}{key}:").unwrap();
            for (i, x) in a.iter().enumerate() {
                write_value(out, &format!("[{i}]"), x, indent + 2);
            }
        }
        Value::Array(a) if a.len() > 6 && a.iter().all(Value::is_string) => {
            writeln!(out, "{pad}{key}:").unwrap();
            for x in a {
                writeln!(out, "{pad}  - {}", scalar(x)).unwrap();
            }
        }
        other => writeln!(out, "{pad}{key}: {}", scalar(other)).unwrap(),
    }
}

fn status(ok: &Value) -> &'static str {
    if ok.as_bool() == Some(true) {
        "ok"
    } else {
        "FAILED"
    }
}

pub fn render_text(report: &Value) -> String {
    let mut out = String::new();
    if let Some(t) = report["title"].as_str() {
        writeln!(out, "{t}").unwrap();
        writeln!(out, "{}", "=".repeat(t.chars().count())).unwrap();
    }
    writeln!(out, "field Q(zeta_{}), seed {}, schema {}", report["root_order"], report["seed"], report["schema_version"]).unwrap();
    if let Some(decls) = report["declarations"].as_array() {
        writeln!(out, "\ndeclarations").unwrap();
        for d in decls {
            let detail = match d.get("error") {
                Some(e) => scalar(e),
                None => d["summary"].as_object().map(|m| m.iter().map(|(k, v)| format!("{k}={}", scalar(v))).collect::<Vec<_>>().join(" ")).unwrap_or_default(),
            };
            writeln!(out, "  {:<8} {:<12} {:<6} {detail}", scalar(&d["kind"]), scalar(&d["name"]), status(&d["ok"])).unwrap();
        }
    }
    if let Some(cmds) = report["commands"].as_array() {
        for c in cmds {
            writeln!(out, "\ncheck {} {}: {}", scalar(&c["command"]), scalar(&c["target"]), status(&c["ok"])).unwrap();
            if let Some(e) = c.get("error") {
                writeln!(out, "  error: {}", scalar(e)).unwrap();
            }
            if let Some(Value::Object(m)) = c.get("result") {
                for (k, v) in m {
                    write_value(&mut out, k, v, 2);
                }
            }
        }
    }
    if report["stopped_early"].as_bool() == Some(true) {
        writeln!(out, "\nstopped at the first failure").unwrap();
    }
    writeln!(out, "\noverall: {}", status(&report["ok"])).unwrap();
    out
}
