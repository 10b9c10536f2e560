# !/usr/bin/env python3
# -*- coding: utf-8 -*-
# @time: 2026/10/17 22:40
# @description: test for the training loop, early stopping and the experiment harness
import json
import unittest
import warnings

import torch

from nn.DenseHead import DenseHead, forward, init_params
from utils.data import MultiLabelDataset, SyntheticSpec, generate, stratified_split
from utils.errors import ConfigurationError, DegenerateGroupError
from utils.losses import LossConfig, LossKind, loss_value
from utils.trainer import (
    EarlyStopping, Trainer, TrainConfig, compare_losses, evaluate, evaluate_loss, lambda_sweep, train,
)


def _quick(loss: LossConfig = LossConfig(), **update) -> TrainConfig:
    settings = dict(loss=loss, hidden_sizes=(8, 4), dropout_rate=0.1, epochs_max=3, steps_per_epoch=5,
                    batch_size=32, seed=0)
    settings.update(update)
    return TrainConfig(**settings)


def _small(n_samples: int = 400, seed: int = 1) -> MultiLabelDataset:
    return generate(SyntheticSpec(n_samples=n_samples, feature_dim=4, base_rates=[0.3, 0.2], separability=3.0,
                                  seed=seed))


class TestEarlyStopping(unittest.TestCase):

    def test_constant_loss_stops_after_patience_plus_one(self):
        stopper = EarlyStopping(min_delta=1e-4, patience=5)
        epochs = 0
        for _ in range(100):
            epochs += 1
            if stopper.update(0.7):
                break
        self.assertEqual(epochs, 6)
        self.assertEqual(stopper.best_epoch, 1)

    def test_improvements_reset_the_counter(self):
        stopper = EarlyStopping(min_delta=0.1, patience=2)
        self.assertFalse(stopper.update(1.0))
        self.assertFalse(stopper.update(0.95))
        self.assertFalse(stopper.update(0.5))
        self.assertEqual(stopper.best_epoch, 3)
        self.assertFalse(stopper.update(0.45))
        self.assertTrue(stopper.update(0.41))

    def test_invalid(self):
        with self.assertRaises(ConfigurationError):
            EarlyStopping(min_delta=0.0)
        with self.assertRaises(ConfigurationError):
            EarlyStopping(patience=0)


class TestTrain(unittest.TestCase):

    def test_zero_weights_predict_everything_positive(self):
        d = _small()
        params = init_params([4, 3, 2], seed=0)
        params = params.replace([torch.zeros_like(t) for t in params.tensors()])
        report = evaluate(params, d)
        self.assertEqual(report.per_group_ba, [0.5, 0.5])
        self.assertEqual(report.max_diff, 0.0)

    def test_gap_without_fairness_term_trains_like_oe(self):
        d = _small()
        oe_params, oe_trace = train(d, _quick(LossConfig(kind=LossKind.OE)))
        gap_params, gap_trace = train(d, _quick(LossConfig(kind=LossKind.GAP_MULTI, lam=0.0)))
        self.assertEqual(oe_trace.epoch_losses, gap_trace.epoch_losses)
        self.assertTrue(all(torch.equal(a, b) for a, b in zip(oe_params.tensors(), gap_params.tensors())))

    def test_training_is_deterministic(self):
        d = _small()
        config = _quick(LossConfig(kind=LossKind.CLA, lam=0.5))
        first, trace = train(d, config)
        second, _ = train(d, config)
        self.assertTrue(all(torch.equal(a, b) for a, b in zip(first.tensors(), second.tensors())))
        self.assertEqual(trace.epochs_run, 3)
        self.assertEqual(len(trace.reports), 3)
        self.assertIsNotNone(trace.loss.class_weights)

    def test_separable_data_is_learned(self):
        d = generate(SyntheticSpec(n_samples=2000, feature_dim=8, base_rates=[0.3, 0.4, 0.2], separability=8.0,
                                   seed=3))
        split = stratified_split(d, 0.2, seed=0)
        config = _quick(LossConfig(kind=LossKind.GAP_MULTI, lam=1.0), hidden_sizes=(32, 16), dropout_rate=0.0,
                        epochs_max=30, steps_per_epoch=50, learning_rate=0.005)
        params, trace = train(d.subset(split.train), config)
        report = evaluate(params, d.subset(split.test))
        self.assertLess(report.hamming, 0.05)
        self.assertLess(trace.epoch_losses[-1], trace.epoch_losses[0])

    def test_noise_features_give_chance_ba(self):
        d = generate(SyntheticSpec(n_samples=4000, feature_dim=4, base_rates=[0.3, 0.4], separability=0.0, seed=6))
        split = stratified_split(d, 0.5, seed=0)
        params, _ = train(d.subset(split.train), _quick(epochs_max=5, steps_per_epoch=20))
        report = evaluate(params, d.subset(split.test))
        for ba in report.per_group_ba:
            self.assertAlmostEqual(ba, 0.5, delta=0.05)

    def test_degenerate_group_is_refused(self):
        d = _small()
        labels = d.labels.clone()
        labels[:, 1] = 0.0
        degenerate = MultiLabelDataset(d.features, labels, d.group_names)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            with self.assertRaises(DegenerateGroupError) as ctx:
                train(degenerate, _quick())
            self.assertEqual(ctx.exception.groups, ("group_1",))
            params, _ = train(degenerate, _quick(allow_degenerate_groups=True, epochs_max=1))
        self.assertEqual(params.n_groups, 2)

    def test_eval_loss_monitor(self):
        d = _small()
        split = stratified_split(d, 0.25, seed=0)
        d_train, d_eval = d.subset(split.train), d.subset(split.test)
        params, trace = train(d_train, _quick(monitor="eval_loss"), d_eval=d_eval)
        self.assertAlmostEqual(trace.monitored_losses[-1], evaluate_loss(params, d_eval, trace.loss), places=12)
        with self.assertRaises(ConfigurationError):
            Trainer(max_epoch=1, steps_per_epoch=1, monitor="eval_loss", verbose=False).fit(
                DenseHead([4, 2], LossConfig()), d_train)

    def test_evaluate_loss(self):
        d = _small()
        params = init_params([4, 3, 2], seed=2)
        config = LossConfig(kind=LossKind.SOO, lam=2.0)
        expected = float(loss_value(config, d.labels, forward(params, d.features)))
        self.assertEqual(evaluate_loss(params, d, config), expected)


class TestTrainer(unittest.TestCase):

    def test_batched_prediction_matches_forward(self):
        d = _small()
        head = DenseHead([4, 6, 2], LossConfig(), seed=1, dropout_rate=0.2)
        probabilities = Trainer(max_epoch=1, steps_per_epoch=1, verbose=False).predict(head, d, batch_size=64)
        self.assertTrue(torch.allclose(probabilities, forward(head.params, d.features), rtol=0.0, atol=1e-15))

    def test_training_step_end_hook(self):
        calls = []

        class CountingHead(DenseHead):

            def training_step_end(self, step_output):
                calls.append(float(step_output["loss"]))
                return step_output

        head = CountingHead([4, 3, 2], LossConfig(), seed=0)
        trace = Trainer(max_epoch=2, steps_per_epoch=4, batch_size=16, verbose=False).fit(head, _small())
        self.assertEqual(len(calls), 8)
        self.assertAlmostEqual(trace.epoch_losses[0], sum(calls[:4]) / 4, places=12)

    def test_invalid_trainer(self):
        with self.assertRaises(ConfigurationError):
            Trainer(max_epoch=0, steps_per_epoch=1)
        with self.assertRaises(ConfigurationError):
            Trainer(max_epoch=1, steps_per_epoch=1, monitor="accuracy")


class TestExperiments(unittest.TestCase):

    def setUp(self):
        self.d = _small()
        self.split = stratified_split(self.d, 0.25, seed=0)

    def test_compare_losses(self):
        configs = [_quick(LossConfig(kind=LossKind.OE)), _quick(LossConfig(kind=LossKind.GAP_MULTI, lam=1.0))]
        report = compare_losses(self.d, self.split, configs, n_seeds=2)
        self.assertEqual([s.label for s in report.summaries], ["OE", "GAP_MULTI(lambda=1)"])
        self.assertEqual([run.seed for run in report.summary("OE").runs], [0, 1])
        self.assertGreaterEqual(sum(s.best_ba_count for s in report.summaries), 2)
        self.assertIsNotNone(report.summary("OE").std_avg_ba)

        decoded = json.loads(report.to_json())
        self.assertEqual(decoded["n_test"], self.split.test.numel())
        self.assertEqual(len(decoded["runs"]), 4)
        self.assertEqual(set(report.heatmaps()), {"OE", "GAP_MULTI(lambda=1)"})

        parallel = compare_losses(self.d, self.split, configs, n_seeds=2, jobs=2)
        self.assertEqual(parallel.to_json(), report.to_json())

    def test_duplicate_labels_are_numbered(self):
        configs = [_quick(), _quick()]
        report = compare_losses(self.d, self.split, configs, n_seeds=2)
        self.assertEqual([s.label for s in report.summaries], ["OE", "OE#2"])

    def test_compare_needs_two_configs_and_seeds(self):
        with self.assertRaises(ConfigurationError):
            compare_losses(self.d, self.split, [_quick()], n_seeds=2)
        with self.assertRaises(ConfigurationError):
            compare_losses(self.d, self.split, [_quick(), _quick()], n_seeds=1)

    def test_zero_lambda_sweep_reproduces_oe(self):
        base = _quick(LossConfig(kind=LossKind.GAP_MULTI), epochs_max=2)
        sweep = lambda_sweep(self.d, self.split, base, [0.0], n_seeds=2)
        oe = compare_losses(self.d, self.split, [_quick(epochs_max=2), _quick(epochs_max=2)], n_seeds=2)
        swept, reference = sweep.rows[0].summary.runs, oe.summary("OE").runs
        self.assertEqual([run.seed for run in swept], [run.seed for run in reference])
        for run, expected in zip(swept, reference):
            self.assertEqual(run.trace.epoch_losses, expected.trace.epoch_losses, f"seed {run.seed}")
            self.assertEqual(run.report.to_dict(), expected.report.to_dict(), f"seed {run.seed}")
            self.assertEqual(run.test_penalty, expected.test_penalty)

    def test_lambda_sweep(self):
        base = _quick(LossConfig(kind=LossKind.GAP_MULTI), epochs_max=1)
        report = lambda_sweep(self.d, self.split, base, [1.0, 0.0, 1.0], n_seeds=1)
        self.assertEqual([row.lam for row in report.rows], [0.0, 1.0])
        self.assertIn(report.best_lambda, (0.0, 1.0))
        self.assertTrue(report.to_csv().startswith("lambda,mean_avg_ba,mean_max_diff\n0.0,"))
        with self.assertRaises(ConfigurationError):
            lambda_sweep(self.d, self.split, _quick(), [1.0], n_seeds=1)
        with self.assertRaises(ConfigurationError):
            lambda_sweep(self.d, self.split, base, [-1.0], n_seeds=1)


if __name__ == '__main__':
    unittest.main()
