# -*- coding: utf-8 -*-
# Author: ergoweights developers

import numpy as np
from ergoweights.base.sample import OrbitSample
from ergoweights.model.dyadic import build_prefix_sums


class CreateTestingData:
    """A class to create testing data
    """

    def __init__(self):
        self.constant = OrbitSample(np.full(16, 2.), np.ones(16))
        self.spike = OrbitSample([8., 1., 1., 1.], np.ones(4))
        self.pair = OrbitSample([1., 4.], np.ones(2))
        self.pair_13 = OrbitSample([1., 3.], np.ones(2))
        self.weighted_pair = OrbitSample([1., 3.], [1., 3.])
        self.decreasing = OrbitSample([4., 2., 1.], np.ones(3))
        self.lambda_case = OrbitSample([4., 1., 1.], np.ones(3))
        self.doubling_case = OrbitSample(np.ones(4), [1., 1., 2., 4.])

    @staticmethod
    def random_sample(rng, n, weighted=False, log_sd=1.):
        """Log-normal omega, log-normal or unit g"""
        omega = np.exp(log_sd * rng.standard_normal(n))
        g = np.exp(.5 * rng.standard_normal(n)) if weighted else np.ones(n)
        return OrbitSample(omega, g)

    @staticmethod
    def prefix_sums(sample, transforms=()):
        return build_prefix_sums(sample, transforms)
