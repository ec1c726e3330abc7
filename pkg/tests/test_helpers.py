import importlib
import logging
import os
import unittest
from unittest import mock

import utils.formats
from utils.helpers import (bits_to_list, ceil_div, get_default_seed, get_log_level, get_size_cap, iter_submasks,
                           lowest_bit, popcount, to_mask)


class Configuration(unittest.TestCase):

    def test_default_caps(self):
        with mock.patch.dict(os.environ, {}, clear=True):
            self.assertEqual(get_size_cap('eta'), 21)
            self.assertEqual(get_size_cap('rank'), 16)
            self.assertEqual(get_size_cap('mim'), 12)

    def test_specific_cap_override(self):
        with mock.patch.dict(os.environ, {'WIDTHFORGE_CAP_ETA': '9'}, clear=True):
            self.assertEqual(get_size_cap('eta'), 9)
            self.assertEqual(get_size_cap('rank'), 16)

    def test_global_cap_wins(self):
        with mock.patch.dict(os.environ, {'WIDTHFORGE_CAP': '4', 'WIDTHFORGE_CAP_ETA': '9'}, clear=True):
            self.assertEqual(get_size_cap('eta'), 4)

    def test_non_integer_cap_is_ignored(self):
        with mock.patch.dict(os.environ, {'WIDTHFORGE_CAP_ETA': 'many'}, clear=True):
            self.assertEqual(get_size_cap('eta'), 21)

    def test_log_level(self):
        with mock.patch.dict(os.environ, {}, clear=True):
            self.assertEqual(get_log_level(), logging.INFO)
        with mock.patch.dict(os.environ, {'WIDTHFORGE_LOG_LEVEL': 'debug'}):
            self.assertEqual(get_log_level(), logging.DEBUG)
        with mock.patch.dict(os.environ, {'WIDTHFORGE_LOG_LEVEL': 'chatty'}):
            self.assertEqual(get_log_level(), logging.INFO)

    def test_modules_configure_logging_from_environment(self):
        with mock.patch.dict(os.environ, {'WIDTHFORGE_LOG_LEVEL': 'WARNING'}):
            with mock.patch('logging.basicConfig') as configure:
                importlib.reload(utils.formats)
        configure.assert_called_once_with(level=logging.WARNING)

    def test_default_seed(self):
        with mock.patch.dict(os.environ, {'WIDTHFORGE_SEED': '7'}):
            self.assertEqual(get_default_seed(), 7)


class BitSets(unittest.TestCase):

    def test_kernels(self):
        mask = to_mask([0, 3, 5])
        self.assertEqual(mask, 0b101001)
        self.assertEqual(popcount(mask), 3)
        self.assertEqual(bits_to_list(mask), [0, 3, 5])
        self.assertEqual(lowest_bit(0b1000), 3)
        self.assertEqual(ceil_div(7, 3), 3)

    def test_submasks(self):
        self.assertEqual(sorted(iter_submasks(0b101)), [0b1, 0b100, 0b101])


if __name__ == "__main__":
    unittest.main()
