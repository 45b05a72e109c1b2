mod common;

use common::{oracle, world};
use relnav_core::dsrg::{DistanceInterval, RelationValue, Topological};
use relnav_core::error::ReasonerError;
use relnav_core::geometry::Point2;
use relnav_core::gridsim::{sense, Pose};
use relnav_core::reasoner::{
    ask, infer_relation_object, infer_relation_room, ObservationSummary, OracleKnobs, QueryContext, QueryKind,
    Reasoner, ReasonerQuery, ReasonerReply, RemoteConfig, RemoteReasoner, ScriptedReasoner,
};
use std::io::{BufRead, BufReader, Read, Write};
use std::net::TcpListener;
use std::thread;

fn similarity_query(at: Point2, cue: &str) -> ReasonerQuery {
    ReasonerQuery::new(
        QueryKind::Similarity,
        "score",
        QueryContext {
            region_cue: Some(cue.into()),
            observation: Some(ObservationSummary {
                position: at,
                heading: 0.0,
                region: String::new(),
                visible: Vec::new(),
                focus: None,
            }),
            ..Default::default()
        },
    )
}

#[test]
fn co_located_fixtures_relate_as_adjacent() {
    let w = world("two_room.json");
    let r = oracle(&w, OracleKnobs::perfect());
    let (rels, conf) = infer_relation_object(&r, "toilet", "sink", None, Vec::new()).unwrap();
    assert_eq!(conf, 1.0);
    assert_eq!(
        rels,
        vec![
            RelationValue::Topological(Topological::Adjacent),
            RelationValue::Distance(DistanceInterval { lo: 0.0, hi: 2.0 }),
        ]
    );
}

#[test]
fn similarity_inside_the_cue_region_is_one() {
    let w = world("two_room.json");
    let r = oracle(&w, OracleKnobs::perfect());
    let reply = ask(&r, &similarity_query(Point2::new(1.0, 1.5), "bathroom")).unwrap();
    assert!((reply.scalar() - 1.0).abs() < 1e-12, "{reply:?}");
}

#[test]
fn scripted_relation_passes_through() {
    let r = ScriptedReasoner::new().with(
        QueryKind::InferRelationObject,
        ReasonerReply::Relation { relations: vec![RelationValue::Topological(Topological::Adjacent)], confidence: 0.7 },
    );
    let (rels, conf) = infer_relation_object(&r, "toilet", "sink", None, Vec::new()).unwrap();
    assert_eq!(rels, vec![RelationValue::Topological(Topological::Adjacent)]);
    assert_eq!(conf, 0.7);
}

#[test]
fn relation_accuracy_matches_the_knob() {
    let w = world("two_room.json");
    let truth = infer_relation_object(&oracle(&w, OracleKnobs::perfect()), "toilet", "sink", None, Vec::new())
        .unwrap()
        .0;
    let r = oracle(&w, OracleKnobs { relation_acc: 0.8, ..OracleKnobs::perfect() });
    let calls = 1000;
    let correct = (0..calls)
        .filter(|_| infer_relation_object(&r, "toilet", "sink", None, Vec::new()).unwrap().0 == truth)
        .count();
    let freq = correct as f64 / calls as f64;
    assert!((freq - 0.8).abs() <= 0.03, "freq {freq}");
}

#[test]
fn room_relations_follow_doors() {
    let w = world("three_rooms.json");
    let r = oracle(&w, OracleKnobs::perfect());
    let (rels, _) = infer_relation_room(&r, "bathroom", "hallway", Vec::new()).unwrap();
    assert_eq!(rels[0], RelationValue::Topological(Topological::ConnectedTo));
    assert!(matches!(rels[1], RelationValue::Distance(_)));
    let (rels, _) = infer_relation_room(&r, "bathroom", "bedroom", Vec::new()).unwrap();
    assert_eq!(rels.len(), 1);
    assert!(matches!(rels[0], RelationValue::Distance(_)));
}

#[test]
fn oracle_is_reproducible_per_seed() {
    let w = world("two_room.json");
    let knobs = OracleKnobs { relation_acc: 0.5, localize_acc: 0.5, verify_acc: 0.5, redetect_acc: 0.5, ..OracleKnobs::perfect() };
    let obs = sense(&w, Pose { position: Point2::new(1.0, 1.5), heading: 0.0 });
    let run = || {
        let r = oracle(&w, knobs);
        (0..100)
            .map(|_| {
                let rel = infer_relation_object(&r, "toilet", "sink", Some(&obs), Vec::new()).unwrap();
                let loc = ask(
                    &r,
                    &ReasonerQuery::new(
                        QueryKind::Localize,
                        "where",
                        QueryContext {
                            observation: Some(ObservationSummary::from(&obs)),
                            candidates: vec!["bathroom".into(), "hallway".into()],
                            ..Default::default()
                        },
                    ),
                )
                .unwrap();
                (rel, loc)
            })
            .collect::<Vec<_>>()
    };
    assert_eq!(run(), run());
}

/// Serves each canned body to one connection, in order.
fn mock_server(bodies: Vec<&'static str>) -> String {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let addr = listener.local_addr().unwrap();
    thread::spawn(move || {
        for body in bodies {
            let Ok((mut stream, _)) = listener.accept() else { return };
            let mut reader = BufReader::new(stream.try_clone().unwrap());
            let mut len = 0usize;
            loop {
                let mut line = String::new();
                if reader.read_line(&mut line).unwrap_or(0) == 0 || line == "\r\n" {
                    break;
                }
                if let Some(v) = line.to_ascii_lowercase().strip_prefix("content-length:") {
                    len = v.trim().parse().unwrap_or(0);
                }
            }
            let mut buf = vec![0; len];
            let _ = reader.read_exact(&mut buf);
            let _ = write!(
                stream,
                "HTTP/1.1 200 OK\r\ncontent-type: application/json\r\ncontent-length: {}\r\nconnection: close\r\n\r\n{}",
                body.len(),
                body
            );
        }
    });
    format!("http://{addr}")
}

fn remote(endpoint: String) -> RemoteReasoner {
    RemoteReasoner::new(RemoteConfig { endpoint, timeout_s: 2.0, retries: 0, backoff_ms: 1 })
}

#[test]
fn remote_similarity_round_trip() {
    let r = remote(mock_server(vec![r#"{"similarity": 0.42}"#]));
    let reply = ask(&r, &similarity_query(Point2::new(0.0, 0.0), "bathroom")).unwrap();
    assert_eq!(reply, ReasonerReply::Similarity { similarity: 0.42 });
}

#[test]
fn remote_reply_missing_a_field_is_a_protocol_violation() {
    let r = remote(mock_server(vec![r#"{"score": 0.42}"#]));
    let err = ask(&r, &similarity_query(Point2::new(0.0, 0.0), "bathroom")).unwrap_err();
    assert!(matches!(err, ReasonerError::ProtocolViolation(_)), "{err:?}");
}

#[test]
fn unreachable_service_is_unavailable() {
    let port = TcpListener::bind("127.0.0.1:0").unwrap().local_addr().unwrap().port();
    let r = remote(format!("http://127.0.0.1:{port}"));
    let err = r.query(&similarity_query(Point2::new(0.0, 0.0), "bathroom")).unwrap_err();
    assert!(matches!(err, ReasonerError::Unavailable(_)), "{err:?}");
}
