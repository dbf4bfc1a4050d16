// Copyright 2026 The steane-se Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <bit>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace steane {

/// Dense GF(2) vector packed into a word. Bit i is component i.
using Bits = std::uint64_t;

inline bool parity(Bits v) {
    return (std::popcount(v) & 1) != 0;
}

/// Renders the first `n` components, component 0 first ("101" for (1,0,1)).
inline std::string bits_to_string(Bits v, std::size_t n) {
    std::string out(n, '0');
    for (std::size_t i = 0; i < n; i++) {
        if ((v >> i) & 1) {
            out[i] = '1';
        }
    }
    return out;
}

inline Bits bits_from_string(std::string_view text) {
    if (text.size() > 64) {
        throw std::invalid_argument("bit string longer than 64: " + std::string(text));
    }
    Bits v = 0;
    for (std::size_t i = 0; i < text.size(); i++) {
        if (text[i] == '1') {
            v |= Bits{1} << i;
        } else if (text[i] != '0') {
            throw std::invalid_argument("not a bit string: '" + std::string(text) + "'");
        }
    }
    return v;
}

/// Binary matrix over GF(2), one packed word per row (bit j = column j).
class CheckMatrix {
   public:
    CheckMatrix() = default;
    CheckMatrix(std::size_t rows, std::size_t cols) : cols_(cols), rows_(rows, 0) {
        if (cols > 64) {
            throw std::invalid_argument("CheckMatrix supports at most 64 columns");
        }
    }

    static CheckMatrix from_rows(std::size_t cols, std::vector<Bits> rows) {
        CheckMatrix m(rows.size(), cols);
        Bits mask = column_mask(cols);
        for (std::size_t r = 0; r < rows.size(); r++) {
            if (rows[r] & ~mask) {
                throw std::invalid_argument("row has bits beyond column count");
            }
            m.rows_[r] = rows[r];
        }
        return m;
    }

    /// Parses "1110000"-style lines, one row per line. Blank lines and '#' comments are skipped.
    static CheckMatrix parse(std::string_view text) {
        std::vector<Bits> rows;
        std::size_t cols = 0;
        std::size_t line_no = 0;
        std::istringstream in{std::string(text)};
        std::string line;
        while (std::getline(in, line)) {
            line_no++;
            auto hash = line.find('#');
            if (hash != std::string::npos) {
                line.resize(hash);
            }
            auto b = line.find_first_not_of(" \t\r");
            if (b == std::string::npos) {
                continue;
            }
            auto e = line.find_last_not_of(" \t\r");
            std::string row = line.substr(b, e - b + 1);
            if (!rows.empty() && row.size() != cols) {
                throw std::invalid_argument("matrix line " + std::to_string(line_no) + ": ragged row");
            }
            cols = row.size();
            try {
                rows.push_back(bits_from_string(row));
            } catch (const std::invalid_argument& ex) {
                throw std::invalid_argument("matrix line " + std::to_string(line_no) + ": " + ex.what());
            }
        }
        return from_rows(cols, std::move(rows));
    }

    std::size_t rows() const { return rows_.size(); }
    std::size_t cols() const { return cols_; }
    Bits row(std::size_t r) const { return rows_.at(r); }
    const std::vector<Bits>& row_words() const { return rows_; }

    bool get(std::size_t r, std::size_t c) const { return (rows_.at(r) >> c) & 1; }
    void set(std::size_t r, std::size_t c, bool v) {
        if (c >= cols_) {
            throw std::out_of_range("column out of range");
        }
        if (v) {
            rows_.at(r) |= Bits{1} << c;
        } else {
            rows_.at(r) &= ~(Bits{1} << c);
        }
    }

    /// Column c as a vector over the rows (bit r = entry (r, c)).
    Bits column(std::size_t c) const {
        Bits v = 0;
        for (std::size_t r = 0; r < rows_.size(); r++) {
            if (get(r, c)) {
                v |= Bits{1} << r;
            }
        }
        return v;
    }

    /// this * v over GF(2); v indexes columns, result indexes rows.
    Bits apply(Bits v) const {
        Bits out = 0;
        for (std::size_t r = 0; r < rows_.size(); r++) {
            if (parity(rows_[r] & v)) {
                out |= Bits{1} << r;
            }
        }
        return out;
    }

    CheckMatrix operator*(const CheckMatrix& rhs) const {
        if (cols_ != rhs.rows()) {
            throw std::invalid_argument("matrix dimension mismatch in product");
        }
        CheckMatrix out(rows(), rhs.cols());
        for (std::size_t r = 0; r < rows(); r++) {
            Bits acc = 0;
            for (std::size_t k = 0; k < cols_; k++) {
                if (get(r, k)) {
                    acc ^= rhs.row(k);
                }
            }
            out.rows_[r] = acc;
        }
        return out;
    }

    bool operator==(const CheckMatrix&) const = default;

    std::string str() const {
        std::string out;
        for (Bits r : rows_) {
            out += bits_to_string(r, cols_);
            out += '\n';
        }
        return out;
    }

    static CheckMatrix identity(std::size_t n) {
        CheckMatrix m(n, n);
        for (std::size_t i = 0; i < n; i++) {
            m.rows_[i] = Bits{1} << i;
        }
        return m;
    }

    static Bits column_mask(std::size_t cols) {
        return cols >= 64 ? ~Bits{0} : ((Bits{1} << cols) - 1);
    }

   private:
    std::size_t cols_ = 0;
    std::vector<Bits> rows_;
};

/// Reduced row echelon form; returns the rank. `ops`, when given, receives
/// the same row operations (so that ops * original == reduced).
inline std::size_t gf2_row_reduce(std::vector<Bits>& rows, std::size_t cols, std::vector<Bits>* ops = nullptr) {
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < rows.size(); c++) {
        std::size_t pivot = rank;
        while (pivot < rows.size() && !((rows[pivot] >> c) & 1)) {
            pivot++;
        }
        if (pivot == rows.size()) {
            continue;
        }
        std::swap(rows[pivot], rows[rank]);
        if (ops) {
            std::swap((*ops)[pivot], (*ops)[rank]);
        }
        for (std::size_t r = 0; r < rows.size(); r++) {
            if (r != rank && ((rows[r] >> c) & 1)) {
                rows[r] ^= rows[rank];
                if (ops) {
                    (*ops)[r] ^= (*ops)[rank];
                }
            }
        }
        rank++;
    }
    return rank;
}

inline std::size_t gf2_rank(const CheckMatrix& m) {
    std::vector<Bits> rows = m.row_words();
    return gf2_row_reduce(rows, m.cols());
}

/// Inverse of a square matrix; throws if singular.
inline CheckMatrix gf2_inverse(const CheckMatrix& m) {
    if (m.rows() != m.cols()) {
        throw std::invalid_argument("inverse of non-square matrix");
    }
    std::vector<Bits> rows = m.row_words();
    std::vector<Bits> ops = CheckMatrix::identity(m.rows()).row_words();
    if (gf2_row_reduce(rows, m.cols(), &ops) != m.rows()) {
        throw std::invalid_argument("matrix is singular over GF(2)");
    }
    return CheckMatrix::from_rows(m.cols(), std::move(ops));
}

/// Steane / [7,4,3] Hamming parity checks. Columns follow data qubits 1..7.
inline const CheckMatrix& steane_parity_checks() {
    static const CheckMatrix h = CheckMatrix::parse(
        "1111000\n"
        "0110110\n"
        "0011011\n");
    return h;
}

/// The 3x3 transform the canonical circuits use to turn raw ancilla bits into
/// syndromes. Its columns are columns 2, 3 and 5 of the parity checks.
inline const CheckMatrix& effective_parity_checks() {
    static const CheckMatrix hp = CheckMatrix::parse(
        "110\n"
        "111\n"
        "010\n");
    return hp;
}

/// How a circuit's raw measurement bits relate to the standard syndrome.
struct SyndromeMapSpec {
    CheckMatrix measured_matrix;  ///< one row per syndrome ancilla: its data parity
    CheckMatrix to_standard;      ///< s = to_standard * b

    bool operator==(const SyndromeMapSpec&) const = default;
};

/// Finds the unique T with T * measured == H. Throws when `measured` is rank
/// deficient or does not span the same row space as H.
inline SyndromeMapSpec solve_to_standard(const CheckMatrix& measured, const CheckMatrix& h = steane_parity_checks()) {
    if (measured.rows() != h.rows() || measured.cols() != h.cols()) {
        throw std::invalid_argument(
            "measured matrix is " + std::to_string(measured.rows()) + "x" + std::to_string(measured.cols()) +
            ", expected " + std::to_string(h.rows()) + "x" + std::to_string(h.cols()));
    }
    std::size_t n = measured.rows();
    std::vector<Bits> reduced = measured.row_words();
    std::vector<Bits> ops = CheckMatrix::identity(n).row_words();
    if (gf2_row_reduce(reduced, measured.cols(), &ops) != n) {
        throw std::invalid_argument("measured matrix is rank deficient; not a syndrome circuit");
    }
    // Express each row of h in the reduced basis, then map back through ops.
    CheckMatrix t(n, n);
    for (std::size_t r = 0; r < h.rows(); r++) {
        Bits target = h.row(r);
        Bits combo = 0;
        Bits acc = 0;
        for (std::size_t k = 0; k < n; k++) {
            int lead = std::countr_zero(reduced[k]);
            if (((target ^ acc) >> lead) & 1) {
                acc ^= reduced[k];
                combo ^= ops[k];
            }
        }
        if (acc != target) {
            throw std::invalid_argument("measured row space differs from the code's check space");
        }
        for (std::size_t k = 0; k < n; k++) {
            t.set(r, k, (combo >> k) & 1);
        }
    }
    return SyndromeMapSpec{measured, t};
}

}  // namespace steane
