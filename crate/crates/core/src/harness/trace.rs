use crate::geometry::Point2;
use crate::gridsim::Action;
use serde::{Deserialize, Serialize};

/// One step of an episode trace.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub step: u32,
    pub pos: Point2,
    pub heading: f64,
    pub action: Action,
    pub region: String,
    /// Labels detected this frame.
    pub detections: Vec<String>,
    /// Verdicts as `TP|FP|FN` plus the resolution, e.g. `FP:rejected`.
    pub verdicts: Vec<String>,
    pub chosen_frontier: Option<Point2>,
    pub score: Option<f64>,
}

/// Renders records as JSON lines.
pub fn to_jsonl(records: &[TraceRecord]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r).expect("trace record serialises"));
        out.push('\n');
    }
    out
}

pub fn from_jsonl(text: &str) -> Result<Vec<TraceRecord>, serde_json::Error> {
    text.lines().filter(|l| !l.trim().is_empty()).map(serde_json::from_str).collect()
}

/// Human-readable one-line rendering used by the trace replay command.
pub fn render_line(r: &TraceRecord) -> String {
    let mut s = format!(
        "{:>4} ({:6.2},{:6.2}) {:>5.1}deg {:<9} {:<12}",
        r.step,
        r.pos.x,
        r.pos.y,
        r.heading,
        format!("{:?}", r.action),
        r.region
    );
    if !r.detections.is_empty() {
        s.push_str(&format!(" det=[{}]", r.detections.join(",")));
    }
    if !r.verdicts.is_empty() {
        s.push_str(&format!(" ramm=[{}]", r.verdicts.join(",")));
    }
    if let Some(f) = r.chosen_frontier {
        s.push_str(&format!(" frontier=({:.2},{:.2})", f.x, f.y));
        if let Some(v) = r.score {
            s.push_str(&format!(" score={v:.3}"));
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jsonl_round_trips() {
        let r = TraceRecord {
            step: 3,
            pos: Point2::new(1.0, 2.0),
            heading: 90.0,
            action: Action::Forward,
            region: "hallway".into(),
            detections: vec!["sink".into()],
            verdicts: vec!["FN:recovered".into()],
            chosen_frontier: Some(Point2::new(4.0, 4.0)),
            score: Some(0.5),
        };
        let text = to_jsonl(&[r.clone(), r.clone()]);
        assert_eq!(from_jsonl(&text).unwrap(), vec![r.clone(), r.clone()]);
        assert!(render_line(&r).contains("frontier=(4.00,4.00)"));
    }
}
