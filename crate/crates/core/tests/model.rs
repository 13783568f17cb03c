use proptest::prelude::*;
use relicforge::corpus::synth::{Profile, Synth};
use relicforge::model::{
    self, forward, loss_and_grads, sample_from, softmax, train, Mode, ModelCheckpoint, ModelConfig, TrainSample,
};

fn samples(n: usize, seed: u64) -> Vec<TrainSample> {
    let mut synth = Synth::new(seed, Profile::Acceptance);
    (0..n)
        .map(|i| {
            let p = synth.program(&format!("M{i}"));
            sample_from(&p.ast, &p.oracle).unwrap()
        })
        .collect()
}

fn argmax(v: &[f64]) -> usize {
    v.iter().enumerate().fold((0, f64::NEG_INFINITY), |b, (i, &x)| if x > b.1 { (i, x) } else { b }).0
}

#[test]
fn gradients_match_finite_differences() {
    let cfg = ModelConfig { hidden: 4, ..ModelConfig::default() };
    let ckpt = ModelCheckpoint::init(&cfg).unwrap();
    let data = samples(2, 77);
    let (_, grads) = loss_and_grads(&data, &ckpt, Mode::Eval).unwrap();
    let loss_at = |c: &ModelCheckpoint| loss_and_grads(&data, c, Mode::Eval).unwrap().0;
    let eps = 1e-5;
    for (ti, t) in ckpt.tensors.iter().enumerate() {
        let numeric: Vec<f64> = (0..t.data.len())
            .map(|j| {
                let (mut plus, mut minus) = (ckpt.clone(), ckpt.clone());
                plus.tensors[ti].data[j] += eps;
                minus.tensors[ti].data[j] -= eps;
                (loss_at(&plus) - loss_at(&minus)) / (2.0 * eps)
            })
            .collect();
        let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
        let diff: Vec<f64> = numeric.iter().zip(&grads[ti]).map(|(a, b)| a - b).collect();
        let scale = norm(&numeric) + norm(&grads[ti]);
        assert!(scale == 0.0 || norm(&diff) / scale < 1e-4, "{}: {}", t.name, norm(&diff) / scale);
    }
}

#[test]
fn loss_falls_on_a_memorizable_set() {
    let data = samples(8, 5);
    let cfg = ModelConfig { epochs: 50, batch: data.len(), lr: 0.01, dropout: 0.0, ..ModelConfig::default() };
    let ckpt = train(&data, &cfg).unwrap();
    let losses: Vec<f64> = ckpt.history.iter().map(|e| e.loss).collect();
    let down = losses.windows(2).filter(|w| w[1] <= w[0] + 1e-12).count();
    assert!(down * 10 >= (losses.len() - 1) * 9, "{down} of {} transitions non-increasing", losses.len() - 1);
    assert!(losses.last().unwrap() < &losses[0]);
}

#[test]
fn training_is_reproducible_and_checkpoints_round_trip() {
    let data = samples(6, 8);
    let cfg = ModelConfig { epochs: 3, hidden: 8, ..ModelConfig::default() };
    let a = train(&data, &cfg).unwrap();
    let b = train(&data, &cfg).unwrap();
    assert_eq!(model::to_bytes(&a), model::to_bytes(&b));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.rlfm");
    model::save(&a, &path).unwrap();
    assert_eq!(model::load(&path).unwrap(), a);
}

#[test]
fn rayon_pool_size_does_not_change_training() {
    let data = samples(9, 12);
    let cfg = ModelConfig { epochs: 2, hidden: 6, batch: 9, ..ModelConfig::default() };
    let run = |threads| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| model::to_bytes(&train(&data, &cfg).unwrap()))
    };
    assert_eq!(run(1), run(3));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn softmax_sums_to_one(logits in proptest::collection::vec(-50.0f64..50.0, 1..16)) {
        let p = softmax(&logits);
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        prop_assert!(p.iter().all(|&x| (0.0..=1.0).contains(&x)));
    }

    #[test]
    fn scaling_logits_keeps_the_argmax(logits in proptest::collection::vec(-20.0f64..20.0, 2..12), c in 0.01f64..100.0) {
        let scaled: Vec<f64> = logits.iter().map(|v| v * c).collect();
        prop_assert_eq!(argmax(&softmax(&logits)), argmax(&softmax(&scaled)));
    }

    #[test]
    fn scaling_the_output_layer_keeps_predictions(seed in 0u64..1000, c in 0.1f64..10.0) {
        let data = samples(1, seed);
        let ckpt = ModelCheckpoint::init(&ModelConfig { hidden: 6, seed, ..ModelConfig::default() }).unwrap();
        let mut scaled = ckpt.clone();
        for t in scaled.tensors.iter_mut().filter(|t| t.name == "W_y" || t.name == "b_y") {
            t.data.iter_mut().for_each(|v| *v *= c);
        }
        let a = forward(&data[0].steps, &ckpt, Mode::Eval).unwrap();
        let b = forward(&data[0].steps, &scaled, Mode::Eval).unwrap();
        for (x, y) in a.logits.iter().zip(&b.logits) {
            prop_assert_eq!(argmax(x), argmax(y));
        }
    }
}
