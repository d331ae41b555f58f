use serde_json::{Map, Value};

/// Output of one command: ordered key/value pairs printed either as
/// aligned text or as a JSON object.
#[derive(Debug, Default)]
pub struct Report {
    fields: Vec<(String, Value)>,
    /// False when the command's check or verdict failed.
    pub ok: bool,
}

impl Report {
    pub fn new() -> Self {
        Report { fields: Vec::new(), ok: true }
    }

    pub fn put(&mut self, key: &str, v: impl Into<Value>) -> &mut Self {
        self.fields.push((key.to_string(), v.into()));
        self
    }

    pub fn fail(&mut self) -> &mut Self {
        self.ok = false;
        self
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        for (k, v) in &self.fields {
            m.insert(k.clone(), v.clone());
        }
        m.insert("ok".into(), self.ok.into());
        Value::Object(m)
    }

    pub fn to_text(&self) -> String {
        let w = self.fields.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        let mut out = String::new();
        for (k, v) in &self.fields {
            let s = match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            out.push_str(&format!("{k:<w$}  {s}\n"));
        }
        out
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            serde_json::to_string_pretty(&self.to_json()).expect("report is plain JSON") + "\n"
        } else {
            self.to_text()
        }
    }
}
