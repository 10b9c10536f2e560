# !/usr/bin/env python3
# -*- coding: utf-8 -*-
# @time: 2026/10/17 22:20
# @description: test for the dataset, its storage, the synthetic generator and the split
import math
import tempfile
import unittest
import warnings
from pathlib import Path

import torch
from pydantic import ValidationError

from utils.config import load_config
from utils.data import (
    MultiLabelDataset, SyntheticSpec, class_weights, generate, load_dataset, prevalence_stats, save_dataset,
    stratified_split,
)
from utils.errors import ConfigurationError, IngestionError, NumericInputError, ShapeError
from utils.types import DTYPE


def _toy(n: int = 10) -> MultiLabelDataset:
    features = torch.arange(n * 3, dtype=DTYPE).reshape(n, 3) / 7.0
    labels = torch.zeros(n, 2, dtype=DTYPE)
    labels[:2, 0] = 1.0
    labels[1:6, 1] = 1.0
    return MultiLabelDataset(features, labels, ["Asian", "Middle Eastern"])


class TestMultiLabelDataset(unittest.TestCase):

    def test_shapes_and_indexing(self):
        d = _toy()
        self.assertEqual((len(d), d.feature_dim, d.n_groups), (10, 3, 2))
        x, y = d[[0, 3, 4]]
        self.assertEqual((tuple(x.shape), tuple(y.shape)), ((3, 3), (3, 2)))
        self.assertEqual(d.positive_counts(), [2, 5])
        self.assertEqual(MultiLabelDataset(d.features, d.labels).group_names, ["group_0", "group_1"])

    def test_validation(self):
        d = _toy()
        labels = d.labels.clone()
        labels[0, 0] = 2.0
        with self.assertRaises(NumericInputError):
            MultiLabelDataset(d.features, labels)
        features = d.features.clone()
        features[1, 1] = float("nan")
        with self.assertRaises(NumericInputError):
            MultiLabelDataset(features, d.labels)
        with self.assertRaises(ShapeError):
            MultiLabelDataset(d.features[:5], d.labels)
        with self.assertRaises(ConfigurationError):
            MultiLabelDataset(d.features, d.labels, ["A", "A"])

    def test_subset_and_select_groups(self):
        d = _toy()
        sub = d.subset([1, 2])
        self.assertTrue(torch.equal(sub.labels, d.labels[[1, 2]]))
        pair = d.select_groups(["Middle Eastern"])
        self.assertEqual(pair.group_names, ["Middle Eastern"])
        self.assertTrue(torch.equal(pair.labels[:, 0], d.labels[:, 1]))
        with self.assertRaises(ConfigurationError):
            d.select_groups(["White"])


class TestStorage(unittest.TestCase):

    def setUp(self):
        self._dir = tempfile.TemporaryDirectory()
        self.root = Path(self._dir.name)

    def tearDown(self):
        self._dir.cleanup()

    def _write(self, name: str, text: str) -> Path:
        path = self.root / name
        path.write_text(text, encoding="utf-8")
        return path

    def test_csv_round_trip_is_exact(self):
        d = generate(SyntheticSpec(n_samples=60, feature_dim=4, base_rates=[0.3, 0.5], seed=1))
        path = save_dataset(d, self.root / "d.csv")
        self.assertTrue(path.read_text(encoding="utf-8").startswith("f0,f1,f2,f3,g:group_0,g:group_1\n"))
        self.assertTrue(load_dataset(path).equals(d))

    def test_npz_round_trip(self):
        d = _toy()
        path = save_dataset(d, self.root / "d.npz")
        self.assertTrue(load_dataset(path).equals(d))

    def test_hand_written_csv(self):
        path = self._write("hand.csv", "f0,f1,g:Black,g:White\n0.5,-1,1,0\n2,3e-2,0,1\n1,1,1,1\n")
        d = load_dataset(path)
        self.assertEqual(d.group_names, ["Black", "White"])
        self.assertEqual(d.features.tolist(), [[0.5, -1.0], [2.0, 0.03], [1.0, 1.0]])
        self.assertEqual(d.labels.tolist(), [[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])

    def test_bad_label_reports_row_and_column(self):
        path = self._write("bad.csv", "f0,g:A,g:B\n0.1,1,0\n0.2,2,0\n")
        with self.assertRaises(IngestionError) as ctx:
            load_dataset(path)
        self.assertEqual(ctx.exception.row, 2)
        self.assertEqual(ctx.exception.column, "g:A")

    def test_other_ingestion_errors(self):
        cases = {
            "header.csv": "x0,g:A\n0.1,1\n",
            "nolabel.csv": "f0,f1\n0.1,1\n",
            "number.csv": "f0,g:A\nabc,1\n",
            "infinite.csv": "f0,g:A\ninf,1\n",
            "cells.csv": "f0,g:A\n0.1,1,0\n",
            "empty.csv": "",
            "rows.csv": "f0,g:A\n",
        }
        for name, text in cases.items():
            with self.assertRaises(IngestionError, msg=name):
                load_dataset(self._write(name, text))
        with self.assertRaises(IngestionError):
            load_dataset(self.root / "missing.csv")
        with self.assertRaises(IngestionError):
            load_dataset(self._write("d.parquet", "x"))


class TestSynthetic(unittest.TestCase):

    def test_generation_is_deterministic(self):
        spec = SyntheticSpec(n_samples=200, feature_dim=8, base_rates=[0.2, 0.4, 0.1], seed=5)
        self.assertTrue(generate(spec).equals(generate(spec)))
        self.assertFalse(generate(spec).equals(generate(spec.model_copy(update={"seed": 6}))))

    def test_base_rates_within_binomial_bounds(self):
        rates = [0.30, 0.45, 0.25, 0.15, 0.05, 0.05, 0.20]
        for correlation in (0.0, 0.4):
            spec = SyntheticSpec(n_samples=20000, feature_dim=8, base_rates=rates, correlation=correlation, seed=3)
            d = generate(spec)
            for count, rate in zip(d.positive_counts(), rates):
                sigma = math.sqrt(rate * (1.0 - rate) / len(d))
                self.assertLess(abs(count / len(d) - rate), 5.0 * sigma)

    def test_mean_rates_over_seeds(self):
        rates = [0.30, 0.45, 0.05]
        for correlation in (0.0, 0.5):
            totals = torch.zeros(len(rates), dtype=DTYPE)
            for seed in range(20):
                d = generate(SyntheticSpec(n_samples=2000, feature_dim=4, base_rates=rates, correlation=correlation,
                                           seed=seed))
                totals += d.labels.mean(dim=0)
            for mean, rate in zip((totals / 20).tolist(), rates):
                self.assertLess(abs(mean - rate), 0.01, f"correlation {correlation}")

    def test_correlation_creates_multi_group_rows(self):
        base = dict(n_samples=5000, feature_dim=4, base_rates=[0.3, 0.3, 0.3], seed=2)
        independent = prevalence_stats(generate(SyntheticSpec(**base)))
        correlated = prevalence_stats(generate(SyntheticSpec(correlation=0.8, **base)))
        self.assertGreater(correlated.histogram[3], 3 * independent.histogram[3])

    def test_separability_moves_features(self):
        spec = SyntheticSpec(n_samples=4000, feature_dim=6, base_rates=[0.5], separability=[4.0], seed=0)
        d = generate(spec)
        positive = d.features[d.labels[:, 0] == 1].mean(dim=0)
        negative = d.features[d.labels[:, 0] == 0].mean(dim=0)
        self.assertAlmostEqual(float((positive - negative).norm()), 4.0, delta=0.3)

    def test_validation(self):
        with self.assertRaises(ValidationError):
            SyntheticSpec(n_samples=15, feature_dim=2, base_rates=[0.5, 0.5])
        with self.assertRaises(ValidationError):
            SyntheticSpec(n_samples=100, feature_dim=2, base_rates=[0.0, 0.5])
        with self.assertRaises(ValidationError):
            SyntheticSpec(n_samples=100, feature_dim=2, base_rates=[0.5, 0.5], separability=[1.0])
        with self.assertRaises(ConfigurationError):
            load_config(SyntheticSpec, {"n_samples": 100, "feature_dim": 2, "base_rates": [0.5], "noise": 1})


class TestSplitAndStatistics(unittest.TestCase):

    def test_stratified_split(self):
        d = generate(SyntheticSpec(n_samples=5000, feature_dim=4, base_rates=[0.30, 0.05, 0.20], seed=4))
        split = stratified_split(d, 0.2, seed=0)
        self.assertEqual(split.test.numel(), 1000)
        self.assertEqual(split.train.numel() + split.test.numel(), 5000)
        self.assertEqual(len(set(split.train.tolist()) & set(split.test.tolist())), 0)
        train, test = d.labels[split.train].mean(dim=0), d.labels[split.test].mean(dim=0)
        self.assertLess(float((train - test).abs().max()), 0.01)

        again = stratified_split(d, 0.2, seed=0)
        self.assertTrue(torch.equal(split.train, again.train) and torch.equal(split.test, again.test))

    def test_split_of_a_rare_group_warns(self):
        d = _toy(20)
        labels = d.labels.clone()
        labels[:, 0] = 0.0
        labels[7, 0] = 1.0
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            split = stratified_split(MultiLabelDataset(d.features, labels, d.group_names), 0.25, seed=1)
        self.assertTrue(any(issubclass(w.category, RuntimeWarning) for w in caught))
        self.assertEqual(split.test.numel(), 5)
        with self.assertRaises(ConfigurationError):
            stratified_split(d, 1.0, seed=0)

    def test_class_weights(self):
        weights = class_weights(_toy())
        self.assertEqual(weights.as_pairs(), [(2.5, 0.625), (1.0, 1.0)])
        self.assertEqual(weights.undefined, ())

    def test_class_weights_balance_both_labels(self):
        generator = torch.Generator().manual_seed(8)
        for trial in range(50):
            n = int(torch.randint(20, 400, (1,), generator=generator))
            g = int(torch.randint(1, 6, (1,), generator=generator))
            rates = 0.05 + 0.9 * torch.rand(g, generator=generator, dtype=DTYPE)
            labels = (torch.rand(n, g, generator=generator, dtype=DTYPE) < rates).to(DTYPE)
            labels[0], labels[1] = 1.0, 0.0
            d = MultiLabelDataset(torch.zeros(n, 2, dtype=DTYPE), labels)
            weights = class_weights(d)
            for (w_pos, w_neg), n_pos in zip(weights.as_pairs(), d.positive_counts()):
                self.assertAlmostEqual(w_pos * n_pos, w_neg * (n - n_pos), delta=1e-12 * n, msg=f"trial {trial}")
                self.assertAlmostEqual(w_pos * n_pos, n / 2.0, delta=1e-12 * n)

    def test_degenerate_class_weights(self):
        d = _toy()
        labels = d.labels.clone()
        labels[:, 0] = 0.0
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            weights = class_weights(MultiLabelDataset(d.features, labels, d.group_names))
        self.assertEqual(weights.undefined, ("Asian",))
        self.assertEqual(weights.as_pairs()[0], (1.0, 1.0))
        self.assertTrue(any(issubclass(w.category, RuntimeWarning) for w in caught))

    def test_prevalence(self):
        report = prevalence_stats(_toy())
        self.assertEqual(report.group_counts, [2, 5])
        # row 0 targets one group, row 1 both, rows 2-5 one, rows 6-9 none
        self.assertEqual(report.histogram, [4, 5, 1])
        self.assertEqual(report.to_dict()["group_counts"], {"Asian": 2, "Middle Eastern": 5})


if __name__ == '__main__':
    unittest.main()
