//! One navigation episode: sense, detect, verify, match, refine, decide, act.

use super::config::{Backend, RunConfig};
use super::metrics::spl_term;
use super::trace::TraceRecord;
use crate::drpm::{
    extract_frontiers, generate_guidance, localize_in_graph, nearest_frontier, score_frontier, select_frontier,
    Frontier, GuidancePrompt, OccupancyGrid,
};
use crate::dsrg::{Dsrg, EntityNode, NodeId, NodeKind, RelationValue, SpatialEdge, Topological};
use crate::error::{HarnessError, PlanError};
use crate::geometry::Point2;
use crate::gridsim::{
    in_view_wedge, mark_blocked_ahead, mark_obstacle, plan_local, sense, sense_toward, step, success_check, update_occupancy, Action,
    AgentState, Observation, Scene, World, CELL_SIZE,
};
use crate::perception::{simulate_detector, Detection, TrackId, TrackSet};
use crate::ramm::{correct_fp, redetect_fn, relation_match, FpResolution, MatchOutcome};
use crate::reasoner::{
    infer_relation_object, infer_relation_room, OracleReasoner, Reasoner, RemoteReasoner, ScriptedReasoner,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::Arc;

/// Latched targets below this existence confidence are released.
const UNLATCH_CONFIDENCE: f64 = 0.3;
/// Frames a rejected FP track is kept out of matching.
const REJECT_COOLDOWN: u64 = 10;
/// Frontiers whose midpoint lies this close to a blacklisted point are skipped.
const BLACKLIST_RADIUS: f64 = 0.5;
/// Stop this far inside the success radius to absorb track position error.
const STOP_MARGIN: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureReason {
    Timeout,
    FrontierExhausted,
    StoppedFar,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictCounts {
    pub tp: u64,
    pub fp: u64,
    pub fp_rejected: u64,
    pub fp_confirmed: u64,
    pub fn_emitted: u64,
    pub fn_recovered: u64,
}

impl VerdictCounts {
    pub fn add(&mut self, o: &VerdictCounts) {
        self.tp += o.tp;
        self.fp += o.fp;
        self.fp_rejected += o.fp_rejected;
        self.fp_confirmed += o.fp_confirmed;
        self.fn_emitted += o.fn_emitted;
        self.fn_recovered += o.fn_recovered;
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpisodeResult {
    pub id: u64,
    pub seed: u64,
    pub success: bool,
    pub failure: Option<FailureReason>,
    pub steps: u32,
    pub path_length: f64,
    pub shortest_path: f64,
    pub spl_term: f64,
    pub verdicts: VerdictCounts,
    /// Trace file, relative to the output directory.
    pub trace: Option<String>,
}

#[derive(Clone, Debug)]
pub struct EpisodeOutput {
    pub result: EpisodeResult,
    pub trace: Vec<TraceRecord>,
}

/// Backend for one episode. The oracle draws from its own seeded stream.
pub fn build_reasoner(cfg: &RunConfig, world: &Arc<World>, seed: u64) -> Box<dyn Reasoner> {
    match cfg.reasoner.backend {
        Backend::Oracle => Box::new(OracleReasoner::new(world.clone(), cfg.reasoner.knobs, seed)),
        Backend::Scripted => Box::new(ScriptedReasoner::from_entries(cfg.reasoner.script.clone())),
        Backend::Remote => Box::new(RemoteReasoner::new(cfg.reasoner.remote.clone())),
    }
}

fn detector_rng(seed: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    rng
}

struct Explorer {
    queue: VecDeque<Action>,
    goal: Option<Point2>,
    executed: u32,
    blacklist: Vec<Point2>,
    spin_left: u32,
    prompt: Option<GuidancePrompt>,
    prompt_region: String,
    prompt_age: u32,
    exhausted: bool,
}

impl Explorer {
    fn blacklisted(&self, f: &Frontier) -> bool {
        self.blacklist.iter().any(|b| b.distance(f.midpoint) < BLACKLIST_RADIUS)
    }

    fn clear_plan(&mut self) {
        self.queue.clear();
        self.goal = None;
    }
}

struct Episode<'a> {
    cfg: &'a RunConfig,
    world: Arc<World>,
    reasoner: Box<dyn Reasoner>,
    graph: Dsrg,
    grid: OccupancyGrid,
    tracks: TrackSet,
    state: AgentState,
    target: String,
    pending: Vec<Detection>,
    ignored: BTreeMap<TrackId, u64>,
    latched: Option<TrackId>,
    refined_tracks: BTreeSet<TrackId>,
    refined_rooms: BTreeSet<String>,
    counts: VerdictCounts,
    explorer: Explorer,
}

impl Episode<'_> {
    fn target_detection_track(&self, d: &Detection, track: TrackId, frame: u64) -> bool {
        d.label == self.target
            && self.ignored.get(&track).is_none_or(|&until| frame >= until)
            && self.tracks.get(track).is_some_and(|t| t.is_verified(self.cfg.accumulator.eta_add))
    }

    fn latch(&mut self, id: TrackId) {
        if self.latched.is_none() {
            self.latched = Some(id);
            self.explorer.clear_plan();
        }
    }

    /// Runs detection through tracking and matching; returns trace strings.
    fn perceive(&mut self, obs: &Observation, frame: u64, rng: &mut ChaCha8Rng) -> (Vec<String>, Vec<String>) {
        let vocab = self.world.scene.vocabulary();
        let mut dets = simulate_detector(obs, &vocab, &self.cfg.detector, frame, rng);
        dets.append(&mut self.pending);
        let (world, pose) = (&self.world, obs.pose);
        let assoc = self.tracks.update(&dets, &self.cfg.accumulator, |t| {
            let p = t.position();
            if in_view_wedge(pose, p) && world.line_of_sight(pose.position, p) {
                1.0
            } else {
                0.0
            }
        });
        let labels = dets.iter().map(|d| d.label.clone()).collect();
        let mut verdict_log = Vec::new();

        let mut matched: Vec<(Detection, TrackId)> = Vec::new();
        for (d, a) in dets.iter().zip(&assoc) {
            let duplicate = matches!(a, crate::perception::Association::Duplicate(_));
            if d.label != self.target || (!duplicate && self.target_detection_track(d, a.track(), frame)) {
                matched.push((d.clone(), a.track()));
            }
        }

        if !self.cfg.modules.ramm_enabled {
            if let Some(&(_, id)) = matched.iter().find(|(d, _)| d.label == self.target) {
                self.latch(id);
            }
            return (labels, verdict_log);
        }

        let ramm_dets: Vec<Detection> = matched.iter().map(|(d, _)| d.clone()).collect();
        let track_of = |d: &Detection| matched.iter().find(|(m, _)| m == d).map(|(_, id)| *id);
        for v in relation_match(&obs.region_label, &ramm_dets, &self.graph) {
            match v.outcome {
                MatchOutcome::Tp => {
                    self.counts.tp += 1;
                    verdict_log.push("TP".to_owned());
                    if let Some(id) = v.subject.as_ref().and_then(track_of) {
                        self.latch(id);
                    }
                }
                MatchOutcome::Fp => {
                    self.counts.fp += 1;
                    let id = v.subject.as_ref().and_then(track_of);
                    match correct_fp(&v, obs, &self.graph, self.reasoner.as_ref()) {
                        Ok(FpResolution::ConfirmedTarget) => {
                            self.counts.fp_confirmed += 1;
                            verdict_log.push("FP:confirmed".to_owned());
                            if let Some(id) = id {
                                self.latch(id);
                            }
                        }
                        _ => {
                            self.counts.fp_rejected += 1;
                            verdict_log.push("FP:rejected".to_owned());
                            if let Some(id) = id {
                                self.ignored.insert(id, frame + REJECT_COOLDOWN);
                                if self.latched == Some(id) {
                                    self.latched = None;
                                }
                            }
                        }
                    }
                }
                MatchOutcome::Fn => {
                    self.counts.fn_emitted += 1;
                    match redetect_fn(obs, &self.graph, &self.target, self.reasoner.as_ref(), frame + 1) {
                        Ok(Some(d)) => {
                            self.counts.fn_recovered += 1;
                            verdict_log.push("FN:recovered".to_owned());
                            self.pending.push(d);
                        }
                        _ => verdict_log.push("FN".to_owned()),
                    }
                }
            }
        }
        (labels, verdict_log)
    }

    fn fuse_relations(&mut self, src: &NodeId, dst: &NodeId, rels: Vec<RelationValue>, conf: f64) {
        let kinds = self.cfg.relations.kinds();
        for rel in rels.into_iter().filter(|r| kinds.contains(r.kind())) {
            let edge = SpatialEdge::new(src.as_str(), dst.as_str(), rel, conf);
            // endpoints were just upserted, so fusion cannot fail
            let _ = self.graph.fuse_edge(edge, self.cfg.lambda_fuse);
        }
    }

    fn refine_room(&mut self, room: &str) {
        let Some(target_room) = self.graph.target_region().map(|r| r.label.clone()) else { return };
        if room == target_room || room == "unknown" || !self.refined_rooms.insert(room.to_owned()) {
            return;
        }
        let excerpt = self.graph.edges().map(|e| e.key().to_string()).collect();
        let Ok((rels, conf)) = infer_relation_room(self.reasoner.as_ref(), &target_room, room, excerpt) else {
            return;
        };
        let target_id = self.graph.region_by_label(&target_room).map(|n| n.id.clone());
        let room_id = self.graph.upsert_node(EntityNode::observed(NodeKind::Region, room, conf, None), self.cfg.lambda_fuse);
        if let Some(tid) = target_id {
            self.fuse_relations(&tid, &room_id, rels, conf);
        }
    }

    /// Writes verified tracks and visited rooms into the graph.
    fn refine(&mut self, obs: &Observation) {
        let eta = self.cfg.accumulator.eta_add;
        let lam = self.cfg.lambda_fuse;
        self.refine_room(&obs.region_label);
        let candidates: Vec<(TrackId, String, Point2, f64)> = self
            .tracks
            .verified(eta)
            .into_iter()
            .filter(|t| t.label != self.target && !self.refined_tracks.contains(&t.id))
            .map(|t| (t.id, t.label.clone(), t.position(), t.existence))
            .collect();
        let target_room = self.graph.target_region().map(|r| r.label.clone());
        for (id, label, pos, conf) in candidates {
            self.refined_tracks.insert(id);
            let room = self.world.scene.room_label_at(pos).unwrap_or("unknown").to_owned();
            if Some(&room) != target_room.as_ref() {
                self.refine_room(&room);
                continue;
            }
            let node = self.graph.upsert_node(EntityNode::observed(NodeKind::Object, &label, conf, Some(pos)), lam);
            let region = self.graph.upsert_node(EntityNode::observed(NodeKind::Region, &room, conf, None), lam);
            if self.cfg.relations.use_topological {
                let inside = SpatialEdge::new(node.as_str(), region.as_str(), RelationValue::Topological(Topological::Inside), conf);
                let _ = self.graph.fuse_edge(inside, lam);
            }
            let target_id = self.graph.target_id().clone();
            if self.graph.incident(&node).any(|e| e.touches(&target_id)) {
                continue;
            }
            let excerpt = self.graph.incident(&target_id).map(|e| e.key().to_string()).collect();
            if let Ok((rels, c)) = infer_relation_object(self.reasoner.as_ref(), &self.target, &label, Some(obs), excerpt) {
                self.fuse_relations(&target_id, &node, rels, c);
            }
        }
    }

    /// Action toward the latched target, or `None` when the latch is dropped.
    fn approach(&mut self) -> Option<Action> {
        let id = self.latched?;
        let track = self.tracks.get(id).filter(|t| t.existence >= UNLATCH_CONFIDENCE);
        let Some(track) = track else {
            self.latched = None;
            return None;
        };
        let goal = track.position();
        let d_s = self.world.scene.episode.d_s;
        let dist = self.state.position.distance(goal);
        if dist <= d_s - STOP_MARGIN {
            return Some(Action::Stop);
        }
        match plan_local(&self.grid, self.state.pose(), goal) {
            Ok(plan) if !plan.actions.is_empty() => Some(plan.actions[0]),
            _ if dist <= d_s => Some(Action::Stop),
            _ => {
                self.ignored.insert(id, u64::MAX);
                self.latched = None;
                None
            }
        }
    }

    fn frontier_scores(&mut self, frontiers: &[Frontier], obs: &Observation) -> Vec<f64> {
        let ex = &mut self.explorer;
        let stale = ex.prompt.is_none() || ex.prompt_region != obs.region_label || ex.prompt_age >= self.cfg.cadence.guidance_every;
        if stale {
            let agent = localize_in_graph(obs, &self.graph, self.reasoner.as_ref());
            ex.prompt = Some(generate_guidance(&self.graph, &agent, self.cfg.template_id, self.cfg.modules.cues()));
            ex.prompt_region = obs.region_label.clone();
            ex.prompt_age = 0;
        }
        let prompt = ex.prompt.clone().expect("prompt just set");
        let pose = self.state.pose();
        frontiers
            .iter()
            .map(|f| {
                let toward = sense_toward(&self.world, pose.position, f.midpoint);
                score_frontier(f, pose, &toward, &prompt, self.reasoner.as_ref())
            })
            .collect()
    }

    /// Chooses a frontier and fills the plan queue. Returns the choice.
    fn redecide(&mut self, obs: &Observation) -> Option<(Point2, Option<f64>)> {
        if let Some(g) = self.explorer.goal.take() {
            if self.explorer.queue.is_empty() {
                self.explorer.blacklist.push(g);
            }
        }
        self.explorer.queue.clear();
        let mut frontiers: Vec<Frontier> = extract_frontiers(&self.grid)
            .into_iter()
            .filter(|f| !self.explorer.blacklisted(f))
            .collect();
        let guided = self.cfg.modules.drpm_enabled();
        let mut scores = if guided { self.frontier_scores(&frontiers, obs) } else { Vec::new() };
        let pos = self.state.position;
        loop {
            let pick = if guided {
                select_frontier(&frontiers, &scores, pos)
            } else {
                nearest_frontier(&frontiers, pos)
            };
            let k = match pick {
                Ok(k) => k,
                Err(PlanError::EmptyFrontierSet) | Err(_) => {
                    self.explorer.exhausted = true;
                    return None;
                }
            };
            let f = frontiers.remove(k);
            let score = guided.then(|| scores.remove(k));
            match plan_local(&self.grid, self.state.pose(), f.midpoint) {
                Ok(plan) if !plan.actions.is_empty() => {
                    self.explorer.queue = plan.actions.into();
                    self.explorer.goal = Some(f.midpoint);
                    self.explorer.executed = 0;
                    return Some((f.midpoint, score));
                }
                _ => self.explorer.blacklist.push(f.midpoint),
            }
        }
    }
}

/// Runs one episode on `scene` with `prior` as the initial graph.
pub fn run_episode(scene: &Scene, prior: &Dsrg, cfg: &RunConfig) -> Result<EpisodeOutput, HarnessError> {
    if prior.target_label() != scene.episode.target_label {
        return Err(HarnessError::ConfigInvalid(format!(
            "prior targets `{}` but the scene asks for `{}`",
            prior.target_label(),
            scene.episode.target_label
        )));
    }
    let seed = scene.seed;
    let world = Arc::new(World::new(scene.clone()));
    let task = scene.episode.clone();
    let mut ep = Episode {
        cfg,
        reasoner: build_reasoner(cfg, &world, seed),
        world,
        graph: prior.with_edge_kinds(cfg.relations.kinds()),
        grid: OccupancyGrid::new(Point2::new(0.0, 0.0), scene.bounds.width, scene.bounds.height, CELL_SIZE),
        tracks: TrackSet::new(),
        state: AgentState::new(task.start, task.heading),
        target: task.target_label.clone(),
        pending: Vec::new(),
        ignored: BTreeMap::new(),
        latched: None,
        refined_tracks: BTreeSet::new(),
        refined_rooms: BTreeSet::new(),
        counts: VerdictCounts::default(),
        explorer: Explorer {
            queue: VecDeque::new(),
            goal: None,
            executed: 0,
            blacklist: Vec::new(),
            spin_left: cfg.cadence.initial_spin,
            prompt: None,
            prompt_region: String::new(),
            prompt_age: 0,
            exhausted: false,
        },
    };
    let mut rng = detector_rng(seed);
    let mut trace = Vec::new();
    let mut frame: u64 = 0;

    while !ep.state.stopped && ep.state.steps < task.max_steps {
        let obs = sense(&ep.world, ep.state.pose());
        update_occupancy(&mut ep.grid, &obs);
        let (detections, verdicts) = ep.perceive(&obs, frame, &mut rng);
        if frame > 0 && frame % cfg.cadence.refine_every as u64 == 0 {
            ep.refine(&obs);
        }

        let mut chosen = None;
        let action = match ep.approach() {
            Some(a) => a,
            None if ep.explorer.spin_left > 0 => {
                ep.explorer.spin_left -= 1;
                Action::TurnLeft
            }
            None => {
                if ep.explorer.queue.is_empty() || ep.explorer.executed >= cfg.cadence.redecide_every {
                    chosen = ep.redecide(&obs);
                }
                match ep.explorer.queue.pop_front() {
                    Some(a) => a,
                    None => Action::Stop,
                }
            }
        };
        ep.explorer.executed += 1;
        ep.explorer.prompt_age += 1;

        let before = ep.state.position;
        let outcome = step(&ep.world, &ep.state, action)?;
        if let Some(hit) = outcome.collision {
            mark_obstacle(&mut ep.grid, hit, before);
            mark_blocked_ahead(&mut ep.grid, ep.state.pose());
            ep.explorer.clear_plan();
        }
        ep.state = outcome.state;
        if cfg.trace {
            trace.push(TraceRecord {
                step: ep.state.steps,
                pos: ep.state.position,
                heading: ep.state.heading,
                action,
                region: obs.region_label.clone(),
                detections,
                verdicts,
                chosen_frontier: chosen.map(|c| c.0),
                score: chosen.and_then(|c| c.1),
            });
        }
        frame += 1;
    }

    let targets = scene.target_positions();
    let success = success_check(&ep.state, &targets, task.d_s, task.max_steps);
    let failure = if success {
        None
    } else if ep.explorer.exhausted {
        Some(FailureReason::FrontierExhausted)
    } else if ep.state.stopped {
        Some(FailureReason::StoppedFar)
    } else {
        Some(FailureReason::Timeout)
    };
    Ok(EpisodeOutput {
        result: EpisodeResult {
            id: seed,
            seed,
            success,
            failure,
            steps: ep.state.steps,
            path_length: ep.state.path_length,
            shortest_path: task.shortest_path_m,
            spl_term: spl_term(success, task.shortest_path_m, ep.state.path_length),
            verdicts: ep.counts,
            trace: None,
        },
        trace,
    })
}
