//! Canonical pretty printer. Its output parses back to an equal document.

use crate::syntax::*;
use std::fmt::Write;

fn prec(s: &Scalar) -> u8 {
    match s {
        Scalar::Add(..) | Scalar::Sub(..) => 1,
        Scalar::Mul(..) | Scalar::Div(..) => 2,
        Scalar::Neg(_) => 3,
        Scalar::Pow(..) => 4,
        Scalar::Int(_) | Scalar::Zeta | Scalar::Root(..) => 5,
    }
}

fn wrap(s: &Scalar, min: u8) -> String {
    let text = scalar(s);
    if prec(s) < min {
        format!("({text})")
    } else {
        text
    }
}

pub fn scalar(s: &Scalar) -> String {
    match s {
        Scalar::Int(n) if *n < 0 => format!("-{}", n.unsigned_abs()),
        Scalar::Int(n) => n.to_string(),
        Scalar::Zeta => "zeta".into(),
        Scalar::Root(m, _) => format!("zeta({m})"),
        Scalar::Neg(a) => format!("-{}", wrap(a, 3)),
        Scalar::Add(a, b) => format!("{} + {}", wrap(a, 1), wrap(b, 2)),
        Scalar::Sub(a, b) => format!("{} - {}", wrap(a, 1), wrap(b, 2)),
        Scalar::Mul(a, b) => format!("{}*{}", wrap(a, 2), wrap(b, 3)),
        Scalar::Div(a, b) => format!("{}/{}", wrap(a, 2), wrap(b, 3)),
        Scalar::Pow(a, e) => format!("{}^{e}", wrap(a, 5)),
    }
}

pub fn label(text: &str) -> String {
    let ident = text.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && text.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
        && text != "zeta";
    if ident {
        text.to_string()
    } else {
        format!("\"{text}\"")
    }
}

fn ints(v: &[i64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

fn term(t: &Term) -> String {
    let mut out = String::new();
    if let Some(c) = &t.coeff {
        let text = wrap(c, 2);
        // A leading minus would be read as the term's sign.
        if text.starts_with('-') {
            write!(out, "({})*", scalar(c)).unwrap();
        } else {
            write!(out, "{text}*").unwrap();
        }
    }
    out.push_str(&label(&t.label.text));
    if let Some(d) = &t.degree {
        write!(out, "@[{}]", ints(d)).unwrap();
    }
    out
}

pub fn lincomb(ts: &[Term]) -> String {
    if ts.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, t) in ts.iter().enumerate() {
        match (i, t.negated) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&term(t));
    }
    out
}

fn matrix(m: &Matrix) -> String {
    let rows: Vec<String> = m.iter().map(|r| format!("[{}]", r.iter().map(scalar).collect::<Vec<_>>().join(", "))).collect();
    format!("[{}]", rows.join(", "))
}

fn int_matrix(m: &[Vec<i64>]) -> String {
    let rows: Vec<String> = m.iter().map(|r| format!("[{}]", ints(r))).collect();
    format!("[{}]", rows.join(", "))
}

fn window(w: &Option<Vec<i64>>) -> String {
    match w {
        Some(r) => format!(" box {}", ints(r)),
        None => String::new(),
    }
}

fn declaration(d: &Decl) -> String {
    let name = &d.name.text;
    match &d.kind {
        DeclKind::Algebra(AlgebraExpr::Ctor { name: ctor, args }) => {
            let args: Vec<String> = args
                .iter()
                .map(|a| match a {
                    CtorArg::Int(n) => n.to_string(),
                    CtorArg::Name(n) => n.text.clone(),
                })
                .collect();
            format!("algebra {name} = {}({});", ctor.text, args.join(", "))
        }
        DeclKind::Algebra(AlgebraExpr::Structure { labels, products, unit }) => {
            let mut out = format!("algebra {name} = structure [{}] {{\n", labels.iter().map(|l| label(l)).collect::<Vec<_>>().join(", "));
            for (a, b, rhs) in products {
                writeln!(out, "    {} * {} = {};", label(&a.text), label(&b.text), lincomb(rhs)).unwrap();
            }
            out.push('}');
            if let Some(u) = unit {
                write!(out, " unit {}", lincomb(u)).unwrap();
            }
            out.push(';');
            out
        }
        DeclKind::Auto(a) => {
            let body = match a {
                AutoExpr::Identity { alg } => format!("identity {}", alg.text),
                AutoExpr::AntiTranspose { alg } => format!("antitranspose {}", alg.text),
                AutoExpr::Conj { alg, matrix: m } => format!("conj {} {}", alg.text, matrix(m)),
                AutoExpr::Linear { alg, matrix: m } => format!("linear {} {}", alg.text, matrix(m)),
                AutoExpr::Permute { alg, perm } => format!("permute {} [{}]", alg.text, ints(perm)),
            };
            format!("auto {name} = {body};")
        }
        DeclKind::Grading(GradingExpr::Eigen { auto, root }) => format!("grading {name} = eigen {} root {};", auto.text, scalar(root)),
        DeclKind::Grading(GradingExpr::Components { alg, components, root }) => {
            let comps: Vec<String> = components.iter().map(|c| format!("[{}]", c.iter().map(|v| lincomb(v)).collect::<Vec<_>>().join(", "))).collect();
            let root = root.as_ref().map(|r| format!(" root {}", scalar(r))).unwrap_or_default();
            format!("grading {name} = components {} [{}]{root};", alg.text, comps.join(", "))
        }
        DeclKind::Tower(TowerExpr::Untwisted { alg, steps }) => format!("tower {name} = untwisted {} {steps};", alg.text),
        DeclKind::Tower(TowerExpr::Multiloop { alg, stages }) => {
            let mut out = format!("tower {name} = multiloop {} {{\n", alg.text);
            for (a, r) in stages {
                writeln!(out, "    {} root {};", a.text, scalar(r)).unwrap();
            }
            out.push_str("};");
            out
        }
        DeclKind::Tower(TowerExpr::Loop { alg, stages }) => {
            let mut out = format!("tower {name} = loop {} {{\n", alg.text);
            for s in stages {
                write!(out, "    stage {}", s.auto.text).unwrap();
                if let Some(m) = &s.monomial {
                    write!(out, " monomial {}", int_matrix(m)).unwrap();
                }
                if let Some(c) = &s.chi {
                    write!(out, " chi [{}]", c.iter().map(scalar).collect::<Vec<_>>().join(", ")).unwrap();
                }
                writeln!(out, " root {};", scalar(&s.root)).unwrap();
            }
            out.push_str("};");
            out
        }
    }
}

fn command(c: &Command) -> String {
    let t = &c.target().text;
    let rest = match c {
        Command::Grading { on: Some(a), .. } => format!(" on {}", a.text),
        Command::Build { window: w, .. } | Command::Centroid { window: w, .. } | Command::Untwist { window: w, .. } | Command::Flags { window: w, .. } | Command::Psi { window: w, .. } => window(w),
        Command::CanonicalForm { element, .. } | Command::Member { element, .. } => format!(" {}", lincomb(element)),
        Command::Audit { bound, .. } => format!(" bound {bound}"),
        _ => String::new(),
    };
    format!("check {} {t}{rest};", c.verb())
}

/// Renders a document in canonical layout.
pub fn format_document(doc: &Document) -> String {
    let mut out = format!("field zeta {};\n", doc.root_order);
    if let Some(t) = &doc.title {
        writeln!(out, "report \"{t}\";").unwrap();
    }
    if !doc.declarations.is_empty() {
        out.push('\n');
    }
    for d in &doc.declarations {
        out.push_str(&declaration(d));
        out.push('\n');
    }
    if !doc.commands.is_empty() {
        out.push('\n');
    }
    for c in &doc.commands {
        out.push_str(&command(c));
        out.push('\n');
    }
    out
}
