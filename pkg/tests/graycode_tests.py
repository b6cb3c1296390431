from unittest import TestCase

import numpy

from ManifoldLab import GrayCode
from ManifoldLab.Core import DomainError

class GrayCodeTests(TestCase):

    def test_width_three(self):
        '''Width-3 codes come out in reflected order'''
        words = [GrayCode.bitstring(GrayCode.gray(i, 3)) for i in range(8)]
        self.assertEqual(words, ['000', '001', '011', '010', '110', '111', '101', '100'])

    def test_neighbors_differ_by_one_bit(self):
        '''Consecutive words differ in exactly one bit, including the wraparound, for every width to 16'''
        for k in range(1, 17):
            table = GrayCode.gray_table(k)
            following = numpy.roll(table, -1, axis=0)
            distances = numpy.count_nonzero(table != following, axis=1)

            self.assertEqual(len(distances), 2 ** k)
            self.assertTrue(numpy.all(distances == 1), 'width %d' % k)

    def test_every_word_appears_once(self):
        '''Each table is a permutation of the Boolean cube, for every width to 16'''
        for k in range(1, 17):
            table = GrayCode.gray_table(k)
            values = table.astype(numpy.int64) @ (1 << numpy.arange(k - 1, -1, -1, dtype=numpy.int64))

            self.assertEqual(table.shape, (2 ** k, k))
            self.assertTrue(numpy.array_equal(numpy.sort(values), numpy.arange(2 ** k)), 'width %d' % k)

    def test_table_matches_single_words(self):
        table = GrayCode.gray_table(6)
        for i in range(64):
            self.assertTrue(numpy.array_equal(table[i], GrayCode.gray(i, 6)))

    def test_inverse(self):
        '''gray_inverse undoes every row of every table to width 16'''
        for k in range(1, 17):
            table = GrayCode.gray_table(k)
            indexes = [GrayCode.gray_inverse(row) for row in table]
            self.assertEqual(indexes, list(range(2 ** k)), 'width %d' % k)

        self.assertEqual(GrayCode.gray_inverse('110'), 4)

    def test_width_three_table(self):
        table = GrayCode.gray_table(3)
        self.assertEqual([GrayCode.bitstring(row) for row in table],
                         ['000', '001', '011', '010', '110', '111', '101', '100'])

    def test_flip_positions(self):
        '''Flip positions point at the one bit that changes'''
        positions = GrayCode.flip_positions(3)
        self.assertEqual(list(positions), [2, 1, 2, 0, 2, 1, 2, 0])

        table = GrayCode.gray_table(7)
        for (i, position) in enumerate(GrayCode.flip_positions(7)):
            changed = numpy.flatnonzero(table[i] != table[(i + 1) % 128])
            self.assertEqual(list(changed), [position])

    def test_code_index_wraps(self):
        self.assertEqual(GrayCode.code_index(-1, 3), 7)
        self.assertEqual(GrayCode.code_index(8, 3), 0)
        self.assertEqual(GrayCode.code_index(13, 3), 5)

    def test_expand_codeword(self):
        '''Each bit is repeated, then zeros pad to the ambient dimension'''
        expanded = GrayCode.expand_codeword('101', 2, 8)
        self.assertEqual(GrayCode.bitstring(expanded), '11001100')

        self.assertRaises(DomainError, GrayCode.expand_codeword, '101', 3, 8)
        self.assertRaises(DomainError, GrayCode.expand_codeword, '101', 0, 8)

    def test_hamming(self):
        self.assertEqual(GrayCode.hamming('1011', '0010'), 2)
        self.assertEqual(GrayCode.hamming([0, 0], [0, 0]), 0)
        self.assertRaises(DomainError, GrayCode.hamming, '10', '100')

    def test_bad_arguments(self):
        '''Widths, indexes and bit values are checked'''
        self.assertRaises(DomainError, GrayCode.gray, 8, 3)
        self.assertRaises(DomainError, GrayCode.gray, -1, 3)
        self.assertRaises(DomainError, GrayCode.gray, 0, 0)
        self.assertRaises(DomainError, GrayCode.gray_table, GrayCode.MAX_WIDTH + 1)
        self.assertRaises(DomainError, GrayCode.as_bitstring, [0, 2, 1])
        self.assertRaises(DomainError, GrayCode.as_bitstring, [])
