use crate::sexp::{parse_all, Sexp};

use super::SmtError;

/// Bindings of a `get-value` response such as `((var_in "MI"))`.
pub fn parse_model(text: &str) -> Result<Vec<(String, String)>, SmtError> {
    let fail = |m: String| SmtError::ModelParseFailure(m);
    let exprs = parse_all(text).map_err(|e| fail(e.to_string()))?;
    let [Sexp::List(pairs)] = exprs.as_slice() else {
        return Err(fail(format!("expected one list, got {text:?}")));
    };
    pairs
        .iter()
        .map(|p| match p.list() {
            Some([Sexp::Atom(name), Sexp::Str(value)]) => Ok((name.clone(), value.clone())),
            _ => Err(fail(format!("unexpected binding {p}"))),
        })
        .collect()
}

/// The word of a single-binding `get-value` response, or of a bare string
/// literal.
pub fn parse_model_word(text: &str) -> Result<String, SmtError> {
    if let Ok([Sexp::Str(s)]) = parse_all(text).as_deref() {
        return Ok(s.clone());
    }
    let model = parse_model(text)?;
    match model.as_slice() {
        [(_, w)] => Ok(w.clone()),
        _ => Err(SmtError::ModelParseFailure(format!("expected one binding in {text:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn words() {
        assert_eq!(parse_model_word("((var_in \"MI\"))").unwrap(), "MI");
        assert_eq!(parse_model_word("\"a\"\"b\"").unwrap(), "a\"b");
        assert_eq!(parse_model_word("\"\\u{6E}\"").unwrap(), "n");
        assert_eq!(parse_model_word("\"\\u006E\"").unwrap(), "n");
        assert!(parse_model_word("(error \"x\")").is_err());
        assert!(parse_model_word("((a \"x\") (b \"y\"))").is_err());
        assert_eq!(
            parse_model("((var_in \"MI\") (var_out \"MIU\"))").unwrap(),
            vec![("var_in".into(), "MI".into()), ("var_out".into(), "MIU".into())]
        );
    }
}
