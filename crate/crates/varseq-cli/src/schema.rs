//! Structural validation of report documents against the published schema
//! (docs/report.schema.json). Hand-rolled checks, no external validator.

use serde_json::Value;

fn expect_str(v: &Value, path: &str) -> Result<(), String> {
    if v.is_string() {
        Ok(())
    } else {
        Err(format!("{path}: expected string"))
    }
}

fn expect_bool(v: &Value, path: &str) -> Result<(), String> {
    if v.is_boolean() {
        Ok(())
    } else {
        Err(format!("{path}: expected boolean"))
    }
}

fn expect_key<'a>(obj: &'a Value, key: &str, path: &str) -> Result<&'a Value, String> {
    obj.get(key)
        .ok_or_else(|| format!("{path}: missing key `{key}`"))
}

pub fn validate_report(doc: &Value) -> Result<(), String> {
    if !doc.is_object() {
        return Err("report must be a JSON object".into());
    }
    for key in ["inputs", "results", "warnings", "verification", "timing_ms"] {
        expect_key(doc, key, "report")?;
    }
    let inputs = &doc["inputs"];
    for key in ["context", "tasks"] {
        expect_key(inputs, key, "inputs")?;
    }
    let context = &inputs["context"];
    for key in ["n", "m", "r", "base", "fiber"] {
        expect_key(context, key, "inputs.context")?;
    }
    if !context["n"].is_u64() || !context["m"].is_u64() || !context["r"].is_u64() {
        return Err("inputs.context: n, m, r must be non-negative integers".into());
    }
    if !inputs["tasks"].is_array() {
        return Err("inputs.tasks: expected array".into());
    }

    let results = &doc["results"];
    if !results.is_object() {
        return Err("results: expected object".into());
    }
    if let Some(el) = results.get("euler_lagrange") {
        let arr = expect_key(el, "coefficients", "results.euler_lagrange")?;
        let arr = arr
            .as_array()
            .ok_or("results.euler_lagrange.coefficients: expected array")?;
        for (i, c) in arr.iter().enumerate() {
            expect_str(c, &format!("results.euler_lagrange.coefficients[{i}]"))?;
        }
        expect_str(
            expect_key(el, "source_form", "results.euler_lagrange")?,
            "results.euler_lagrange.source_form",
        )?;
    }
    if let Some(h) = results.get("helmholtz") {
        expect_bool(
            expect_key(h, "locally_variational", "results.helmholtz")?,
            "results.helmholtz.locally_variational",
        )?;
        expect_str(
            expect_key(h, "representative", "results.helmholtz")?,
            "results.helmholtz.representative",
        )?;
    }
    if let Some(list) = results.get("symmetry") {
        for (i, s) in list
            .as_array()
            .ok_or("results.symmetry: expected array")?
            .iter()
            .enumerate()
        {
            let path = format!("results.symmetry[{i}]");
            expect_str(expect_key(s, "field", &path)?, &format!("{path}.field"))?;
            expect_bool(
                expect_key(s, "is_symmetry", &path)?,
                &format!("{path}.is_symmetry"),
            )?;
        }
    }
    if let Some(list) = results.get("noether") {
        for (i, s) in list
            .as_array()
            .ok_or("results.noether: expected array")?
            .iter()
            .enumerate()
        {
            let path = format!("results.noether[{i}]");
            for key in ["field", "momentum", "current", "identity_residual"] {
                expect_str(expect_key(s, key, &path)?, &format!("{path}.{key}"))?;
            }
        }
    }
    if let Some(list) = results.get("nbh") {
        for (i, s) in list
            .as_array()
            .ok_or("results.nbh: expected array")?
            .iter()
            .enumerate()
        {
            let path = format!("results.nbh[{i}]");
            for key in ["field", "current", "boundary", "nbh_current", "onshell_divergence"] {
                expect_str(expect_key(s, key, &path)?, &format!("{path}.{key}"))?;
            }
            expect_bool(expect_key(s, "conserved", &path)?, &format!("{path}.conserved"))?;
            if let Some(mu) = s.get("mu") {
                if !mu.is_null() {
                    expect_bool(
                        expect_key(mu, "is_noether_current", &format!("{path}.mu"))?,
                        &format!("{path}.mu.is_noether_current"),
                    )?;
                }
            }
            expect_bool(
                expect_key(s, "conclusive", &path)?,
                &format!("{path}.conclusive"),
            )?;
        }
    }
    if let Some(list) = results.get("on_shell") {
        for (i, s) in list
            .as_array()
            .ok_or("results.on_shell: expected array")?
            .iter()
            .enumerate()
        {
            let path = format!("results.on_shell[{i}]");
            for key in ["field", "current", "divergence_reduced"] {
                expect_str(expect_key(s, key, &path)?, &format!("{path}.{key}"))?;
            }
            expect_bool(
                expect_key(s, "vanishes_on_shell", &path)?,
                &format!("{path}.vanishes_on_shell"),
            )?;
        }
    }

    if !doc["warnings"].is_array() {
        return Err("warnings: expected array".into());
    }
    let verification = &doc["verification"];
    expect_bool(
        expect_key(verification, "all_passed", "verification")?,
        "verification.all_passed",
    )?;
    if !verification["failures"].is_array() {
        return Err("verification.failures: expected array".into());
    }
    if !doc["timing_ms"].is_u64() {
        return Err("timing_ms: expected integer".into());
    }
    Ok(())
}
