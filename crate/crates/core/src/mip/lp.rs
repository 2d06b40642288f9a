use std::fmt::Write;

use super::model::{MipModel, VarKind};

const LINE: usize = 200;

fn term(out: &mut String, line: &mut usize, first: bool, coef: f64, name: &str) {
    let text = match (first, coef) {
        (true, c) if c == 1.0 => name.to_string(),
        (true, c) if c == -1.0 => format!("- {name}"),
        (true, c) => format!("{c} {name}"),
        (false, c) if c == 1.0 => format!(" + {name}"),
        (false, c) if c == -1.0 => format!(" - {name}"),
        (false, c) if c < 0.0 => format!(" - {} {name}", -c),
        (false, c) => format!(" + {c} {name}"),
    };
    if *line + text.len() > LINE {
        out.push_str("\n   ");
        *line = 3;
    }
    *line += text.len();
    out.push_str(&text);
}

fn expression(out: &mut String, model: &MipModel, head: &str, terms: &[(usize, f64)]) {
    out.push_str(head);
    let mut line = head.len();
    if terms.is_empty() {
        term(out, &mut line, true, 0.0, &model.vars[0].name);
    }
    for (i, &(v, c)) in terms.iter().enumerate() {
        term(out, &mut line, i == 0, c, &model.vars[v].name);
    }
}

/// Writes the model in CPLEX LP format.
pub fn write_lp(model: &MipModel) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "\\ induct model {}", model.name);
    let _ = writeln!(out, "\\ variables {} rows {}", model.vars.len(), model.rows.len());
    out.push_str("Minimize\n");
    expression(&mut out, model, " obj: ", &model.objective);
    out.push_str("\nSubject To\n");
    for r in &model.rows {
        expression(&mut out, model, &format!(" {}: ", r.name), &r.terms);
        let _ = writeln!(out, " {} {}", r.sense.symbol(), r.rhs);
    }
    out.push_str("Bounds\n");
    for v in &model.vars {
        if v.kind == VarKind::Binary {
            continue;
        }
        if v.lower == v.upper {
            let _ = writeln!(out, " {} = {}", v.name, v.lower);
        } else if v.upper.is_finite() {
            let _ = writeln!(out, " {} <= {} <= {}", v.lower, v.name, v.upper);
        } else if v.lower != 0.0 {
            let _ = writeln!(out, " {} >= {}", v.name, v.lower);
        }
    }
    for (section, kind) in [("Generals", VarKind::Integer), ("Binaries", VarKind::Binary)] {
        let names: Vec<&str> = model.vars.iter().filter(|v| v.kind == kind).map(|v| v.name.as_str()).collect();
        if names.is_empty() {
            continue;
        }
        let _ = writeln!(out, "{section}");
        for chunk in names.chunks(8) {
            let _ = writeln!(out, " {}", chunk.join(" "));
        }
    }
    out.push_str("End\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::tiny;
    use crate::mip::{build_mip, MipOptions};

    #[test]
    fn sections_appear_in_order() {
        let inst = tiny::tiny_family("fig4-triangle").unwrap();
        let lp = write_lp(&build_mip(&inst, MipOptions::default()).unwrap());
        let at = |s: &str| lp.find(&format!("\n{s}\n")).unwrap_or_else(|| panic!("missing {s}"));
        assert!(at("Minimize") < at("Subject To"));
        assert!(at("Subject To") < at("Bounds"));
        assert!(at("Bounds") < at("Generals"));
        assert!(at("Generals") < at("Binaries"));
        assert!(lp.ends_with("End\n"));
        assert!(lp.lines().all(|l| l.len() <= LINE + 60));
    }
}
