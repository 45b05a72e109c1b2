//! Prompt strings sent to real models by the remote backend.

pub const PRIOR_SYSTEM: &str = "You are a Spatial Commonsense Reasoner specializing in indoor environments. Your task is to generate physically plausible prior knowledge about spatial relationships using cognitive principles of spatial memory.";

pub const PRIOR_REQUEST: &str =
    "for the target target-object, please provide typical topological, directional and distance relationships";

pub const GUIDANCE_SYSTEM: &str = "You are a Spatial Path Inference Engine for embodied agents. You are searching for a target object in an unfamiliar house. Based on the target and spatial layout knowledge, generate semantic cues for BLIP-2 matching.";

pub const LOCALIZE: &str = "Correlate visual features with DSRG nodes to determine agent's precise graph position";

pub const CUE_INFERENCE: &str = "Given the current visual observation and the DSRG, infer the most informative semantic cues that can help the agent locate the target object more effectively.";

pub const REDETECT: &str =
    "Determine whether the target-object appears in the scene. If found, provide its bounding box coordinates";

pub const VERIFY: &str = "Is the highlighted target-object a genuine instance given the surrounding context and the listed spatial constraints?";

pub const RELATION_OBJECT: &str =
    "Describe the topological, directional and distance relationships between the target-object and the observed object.";

pub const RELATION_ROOM: &str =
    "Describe the topological and distance relationships between the room holding the target-object and the observed room.";

/// Replaces the `target-object` placeholder.
pub fn with_target(template: &str, target: &str) -> String {
    template.replace("target-object", target)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn redetect_prompt_substitutes_target() {
        assert_eq!(
            with_target(REDETECT, "toilet"),
            "Determine whether the toilet appears in the scene. If found, provide its bounding box coordinates"
        );
    }
}
