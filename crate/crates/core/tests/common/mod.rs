use archsteer_core::model::{load_model, ArchitectureModel};
use rand_chacha::ChaCha8Rng;

pub fn random_model(rng: &mut ChaCha8Rng) -> ArchitectureModel {
    let doc = archsteer_oracles::random_model_document(rng);
    load_model(&serde_json::to_vec(&doc).unwrap()).unwrap()
}
