# !/usr/bin/env python3
# -*- coding: utf-8 -*-
# @time: 2026/10/17 21:50
# @description: test for the evaluation metrics

import json
import unittest
import warnings

import torch

from resources.setup import MHS_GROUPS
from utils.errors import ConfigurationError, EmptyInputError, ShapeError, UndefinedMetricError
from utils.metrics import (
    GroupConfusion, avg_ba, ba_diff_matrix, balanced_accuracy, build_report, confusion, group_confusions,
    hamming_loss, macro_prf, matrix_csv, max_diff,
)
from utils.types import DTYPE

# per-group BA x100 in MHS_GROUPS order
OE_ROW = [80.31, 86.91, 81.07, 84.87, 64.99, 67.91, 75.01]
GAP_MULTI_ROW = [83.18, 83.86, 83.47, 83.42, 78.95, 78.32, 82.58]


class TestConfusion(unittest.TestCase):

    def test_rate_reconstruction(self):
        y_true = torch.cat([torch.ones(100), torch.zeros(100)])
        probs = torch.cat([torch.ones(80), torch.zeros(20), torch.ones(30), torch.zeros(70)]) * 0.9
        c = confusion(y_true, probs)
        self.assertEqual(c, GroupConfusion(tp=80, fn=20, fp=30, tn=70))
        self.assertAlmostEqual(balanced_accuracy(c), 0.75, places=15)
        self.assertEqual((c.tpr, c.fpr, c.accuracy), (0.8, 0.3, 0.75))

    def test_threshold_ties_predict_positive(self):
        c = confusion(torch.tensor([1.0, 0.0, 0.0]), torch.full((3,), 0.3), threshold=0.3)
        self.assertEqual((c.tp, c.fn, c.fp, c.tn), (1, 0, 2, 0))

    def test_perfect_and_errors(self):
        c = confusion(torch.tensor([1.0, 0.0, 1.0]), torch.tensor([0.9, 0.1, 0.6]))
        self.assertEqual((c.fn, c.fp), (0, 0))
        with self.assertRaises(ShapeError):
            confusion(torch.tensor([1.0, 0.0]), torch.tensor([0.9, 0.1, 0.6]))
        with self.assertRaises(ConfigurationError):
            confusion(torch.tensor([1.0]), torch.tensor([0.9]), threshold=1.0)

    def test_group_confusions_match_columns(self):
        generator = torch.Generator().manual_seed(0)
        y_true = (torch.rand(50, 4, generator=generator) < 0.3).to(DTYPE)
        probs = torch.rand(50, 4, generator=generator, dtype=DTYPE)
        for g, c in enumerate(group_confusions(y_true, probs)):
            self.assertEqual(c, confusion(y_true[:, g], probs[:, g]))


class TestBalancedAccuracy(unittest.TestCase):

    def test_examples(self):
        self.assertEqual(balanced_accuracy(GroupConfusion(5, 0, 0, 7)), 1.0)
        self.assertEqual(balanced_accuracy(GroupConfusion(4, 4, 9, 9)), 0.5)

    def test_undefined_sides(self):
        with self.assertRaises(UndefinedMetricError) as ctx:
            balanced_accuracy(GroupConfusion(0, 0, 3, 4))
        self.assertEqual(ctx.exception.side, "positives")
        with self.assertRaises(UndefinedMetricError) as ctx:
            balanced_accuracy(GroupConfusion(2, 1, 0, 0))
        self.assertEqual(ctx.exception.side, "negatives")

    def test_prevalence_invariance(self):
        base = GroupConfusion(7, 3, 2, 8)
        for k, m in ((2, 1), (1, 5), (3, 7)):
            scaled = GroupConfusion(k * 7, k * 3, m * 2, m * 8)
            self.assertAlmostEqual(balanced_accuracy(scaled), balanced_accuracy(base), places=15)


class TestAggregates(unittest.TestCase):

    def test_avg_ba(self):
        self.assertEqual(round(avg_ba(GAP_MULTI_ROW), 2), 81.97)
        self.assertAlmostEqual(avg_ba([0.6, 0.6, 0.6]), 0.6, places=15)
        self.assertEqual(avg_ba([0.0, 1.0]), 0.5)
        with self.assertRaises(EmptyInputError):
            avg_ba([])

    def test_max_diff(self):
        self.assertAlmostEqual(max_diff(OE_ROW), 21.92, places=10)
        self.assertAlmostEqual(max_diff(GAP_MULTI_ROW), 5.54, places=10)
        self.assertEqual(max_diff([0.4, 0.4]), 0.0)
        with self.assertRaises(EmptyInputError):
            max_diff([])

    def test_ba_diff_matrix(self):
        matrix = ba_diff_matrix([0.7, 0.8])
        self.assertEqual(float(matrix[0, 0]), 0.0)
        self.assertAlmostEqual(float(matrix[0, 1]), 0.1, places=15)
        self.assertEqual(float(matrix[0, 1]), float(matrix[1, 0]))
        self.assertTrue(torch.equal(ba_diff_matrix([0.3] * 4), torch.zeros(4, 4, dtype=DTYPE)))

        matrix = ba_diff_matrix(OE_ROW)
        self.assertEqual(float(matrix.max()), max_diff(OE_ROW))
        i, j = divmod(int(matrix.argmax()), len(OE_ROW))
        self.assertEqual({MHS_GROUPS[i], MHS_GROUPS[j]}, {"Black", "Native American"})
        self.assertTrue(torch.equal(matrix, matrix.T))

    def test_hamming_against_brute_force(self):
        generator = torch.Generator().manual_seed(1)
        for _ in range(100):
            n = int(torch.randint(1, 1001, (1,), generator=generator))
            g = int(torch.randint(1, 11, (1,), generator=generator))
            y_true = (torch.rand(n, g, generator=generator) < 0.4).to(DTYPE)
            probs = torch.rand(n, g, generator=generator, dtype=DTYPE)
            wrong = 0
            for row_true, row_prob in zip(y_true.tolist(), probs.tolist()):
                for t, p in zip(row_true, row_prob):
                    wrong += int((p >= 0.5) != (t == 1.0))
            self.assertEqual(hamming_loss(y_true, probs), wrong / (n * g))

    def test_hamming_examples(self):
        y_true = torch.tensor([[1.0, 0.0], [0.0, 1.0]])
        self.assertEqual(hamming_loss(y_true, y_true), 0.0)
        self.assertEqual(hamming_loss(y_true, torch.tensor([[1.0, 1.0], [0.0, 1.0]])), 0.25)
        self.assertEqual(hamming_loss(y_true, 1.0 - y_true), 1.0)
        with self.assertRaises(EmptyInputError):
            hamming_loss(torch.zeros(0, 2), torch.zeros(0, 2))

    def test_macro_prf(self):
        self.assertEqual(macro_prf([GroupConfusion(3, 0, 0, 2), GroupConfusion(1, 0, 0, 9)]), (1.0, 1.0, 1.0))
        precision, recall, f1 = macro_prf([GroupConfusion(tp=2, fn=1, fp=1, tn=5), GroupConfusion(4, 0, 0, 4)])
        for value in (precision, recall, f1):
            self.assertAlmostEqual(value, 5.0 / 6.0, places=12)
        # a group never predicted positive scores 0 everywhere
        self.assertEqual(macro_prf([GroupConfusion(0, 3, 0, 5), GroupConfusion(2, 0, 0, 2)]), (0.5, 0.5, 0.5))
        with self.assertRaises(EmptyInputError):
            macro_prf([])
        with self.assertRaises(EmptyInputError):
            macro_prf([GroupConfusion(0, 0, 0, 0)])

    def test_macro_prf_of_a_prediction_matrix(self):
        generator = torch.Generator().manual_seed(6)
        for _ in range(20):
            y_true = (torch.rand(60, 4, generator=generator) < 0.3).to(DTYPE)
            probs = torch.rand(60, 4, generator=generator, dtype=DTYPE) ** 2
            expected = [0.0, 0.0, 0.0]
            for c in group_confusions(y_true, probs):
                p = c.tp / (c.tp + c.fp) if c.tp + c.fp else 0.0
                r = c.tp / (c.tp + c.fn) if c.tp + c.fn else 0.0
                f = 2.0 * p * r / (p + r) if p + r else 0.0
                expected = [e + v / 4.0 for e, v in zip(expected, (p, r, f))]
            for value, reference in zip(macro_prf(group_confusions(y_true, probs)), expected):
                self.assertAlmostEqual(value, reference, places=12)

    def test_single_group_matches_the_vector_form(self):
        generator = torch.Generator().manual_seed(4)
        y_true = (torch.rand(40, 1, generator=generator) < 0.5).to(DTYPE)
        probs = torch.rand(40, 1, generator=generator, dtype=DTYPE)
        self.assertEqual(group_confusions(y_true, probs), [confusion(y_true[:, 0], probs[:, 0])])
        self.assertEqual(hamming_loss(y_true, probs), hamming_loss(y_true[:, 0], probs[:, 0]))
        c = confusion(y_true[:, 0], probs[:, 0])
        self.assertEqual(hamming_loss(y_true, probs), (c.fn + c.fp) / 40)

    def test_group_without_positives_counts_zero(self):
        self.assertEqual(confusion(torch.zeros(4), torch.tensor([0.1, 0.7, 0.2, 0.9])), GroupConfusion(0, 0, 2, 2))
        self.assertEqual(group_confusions(torch.zeros(3, 2), torch.zeros(3, 2)), [GroupConfusion(0, 0, 0, 3)] * 2)


class TestReport(unittest.TestCase):

    def _random_report(self, seed: int):
        generator = torch.Generator().manual_seed(seed)
        y_true = (torch.rand(300, 5, generator=generator) < 0.3).to(DTYPE)
        probs = (0.6 * y_true + 0.7 * torch.rand(300, 5, generator=generator, dtype=DTYPE)).clamp(max=1.0)
        return build_report(y_true, probs, ["a", "b", "c", "d", "e"])

    def test_internal_consistency(self):
        for seed in range(10):
            report = self._random_report(seed)
            self.assertEqual(report.avg_ba, avg_ba(report.per_group_ba))
            self.assertEqual(report.max_diff, max(max(row) for row in report.ba_diff_matrix))
            self.assertEqual(report.max_diff, max(report.per_group_ba) - min(report.per_group_ba))
            for i, row in enumerate(report.ba_diff_matrix):
                self.assertEqual(row[i], 0.0)

    def test_undefined_group_is_excluded(self):
        y_true = torch.tensor([[1.0, 0.0], [0.0, 0.0], [1.0, 0.0], [0.0, 0.0]])
        probs = torch.tensor([[0.9, 0.2], [0.1, 0.7], [0.4, 0.1], [0.2, 0.1]])
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            report = build_report(y_true, probs, ["x", "y"])
        self.assertTrue(any(issubclass(w.category, RuntimeWarning) for w in caught))
        self.assertEqual(report.undefined, {"y": "positives"})
        self.assertIsNone(report.per_group_ba[1])
        self.assertEqual(report.per_group_ba[0], 0.75)
        self.assertEqual((report.avg_ba, report.max_diff), (0.75, 0.0))
        self.assertEqual(report.ba_diff_matrix, [[0.0, None], [None, None]])
        self.assertEqual(report.heatmap_csv(), ",x,y\nx,0.0,\ny,,\n")

    def test_serialisation(self):
        report = self._random_report(3)
        decoded = json.loads(report.to_json())
        self.assertEqual(decoded["groups"], ["a", "b", "c", "d", "e"])
        self.assertEqual(decoded["avg_ba"], report.avg_ba)
        self.assertEqual(set(decoded["confusion"]["a"]), {"tp", "fn", "fp", "tn"})
        rows = report.summary_rows()
        self.assertEqual([name for name, _ in rows[-2:]], ["Max Diff", "Avg BA"])
        self.assertAlmostEqual(rows[-1][1], 100.0 * report.avg_ba, places=12)
        self.assertIn("Avg BA", report.format_summary())

    def test_matrix_csv(self):
        text = matrix_csv(["p", "q"], [[0.0, 0.25], [0.25, 0.0]])
        self.assertEqual(text, ",p,q\np,0.0,0.25\nq,0.25,0.0\n")


if __name__ == '__main__':
    unittest.main()
