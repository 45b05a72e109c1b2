use super::{Pose, World, FOV_DEG, MAX_DEPTH, MIN_DEPTH, RAY_COUNT};
use crate::geometry::{heading_delta, Point2, Segment};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VisibleObject {
    /// Index into the scene's object list.
    pub index: usize,
    pub label: String,
    pub position: Point2,
}

/// One egocentric frame.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    pub pose: Pose,
    pub visible_objects: Vec<VisibleObject>,
    /// Hit distance per ray, `MAX_DEPTH` when nothing is hit.
    pub depth_rays: Vec<f64>,
    pub region_label: String,
    /// Point the view is centred on, for synthesised views toward a goal.
    pub focus: Option<Point2>,
}

impl Observation {
    /// Heading of ray `i` in degrees.
    pub fn ray_heading(&self, i: usize) -> f64 {
        ray_heading(self.pose.heading, i)
    }

    pub fn ray_direction(&self, i: usize) -> Point2 {
        Point2::from_heading(self.ray_heading(i))
    }

    pub fn sees(&self, label: &str) -> bool {
        self.visible_objects.iter().any(|v| v.label == label)
    }
}

pub(crate) fn ray_heading(heading: f64, i: usize) -> f64 {
    let half = FOV_DEG / 2.0;
    heading - half + i as f64 * FOV_DEG / (RAY_COUNT - 1) as f64
}

/// Whether `p` falls inside the sensing wedge at `pose` (ignores occlusion).
pub fn in_view_wedge(pose: Pose, p: Point2) -> bool {
    let v = p - pose.position;
    let d = v.norm();
    (MIN_DEPTH..=MAX_DEPTH).contains(&d) && heading_delta(pose.heading, v.bearing()).abs() <= FOV_DEG / 2.0
}

/// Casts the depth fan and collects visible objects.
pub fn sense(world: &World, pose: Pose) -> Observation {
    let origin = pose.position;
    let depth_rays = (0..RAY_COUNT)
        .map(|i| {
            let dir = Point2::from_heading(ray_heading(pose.heading, i));
            let ray = Segment::new(origin, origin + dir * MAX_DEPTH);
            world
                .blockers
                .iter()
                .filter_map(|w| ray.intersect_param(w))
                .fold(1.0f64, f64::min)
                * MAX_DEPTH
        })
        .collect();
    let visible_objects = world
        .scene
        .objects
        .iter()
        .enumerate()
        .filter(|(_, o)| in_view_wedge(pose, o.position) && world.line_of_sight(origin, o.position))
        .map(|(index, o)| VisibleObject {
            index,
            label: o.label.clone(),
            position: o.position,
        })
        .collect();
    Observation {
        pose,
        visible_objects,
        depth_rays,
        region_label: world.scene.room_label_at(origin).unwrap_or("unknown").to_owned(),
        focus: None,
    }
}

/// View synthesised by rotating in place toward `focus`.
pub fn sense_toward(world: &World, position: Point2, focus: Point2) -> Observation {
    let heading = (focus - position).bearing();
    let mut obs = sense(world, Pose { position, heading });
    obs.focus = Some(focus);
    obs
}
