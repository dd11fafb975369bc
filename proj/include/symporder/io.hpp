#pragma once

// JSON file formats.
//
//   path file     {"dim": 2n, "times": [t0, ...], "matrices": [[row-major 2n*2n], ...]}
//   grid file     {"grid_shape": [n1, ...], "values": [flattened, last axis fastest]}
//   family file   {"grid_shape": [...], "values": [[slice 0], [slice 1], ...],
//                  "times": [...] (optional), "weights": [...] (optional)}
//   matrix file   {"dim": d, "matrix": [row-major d*d]}
//   hermitian     {"n": n, "real": [row-major n*n], "imag": [row-major n*n]}
//
// Errors are reported as InvalidInput with a "file:line:col:" prefix.

#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "symporder/matrix_core.hpp"
#include "symporder/path_calculus.hpp"
#include "symporder/prequantization.hpp"

namespace symporder::io {

using json = nlohmann::json;

class Document {
  public:
    static Document load(const std::string &path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw InvalidInput(path + ":0:0: cannot open file");
        std::ostringstream ss;
        ss << in.rdbuf();
        return parse(ss.str(), path);
    }

    static Document parse(std::string text, std::string name) {
        Document d;
        d.name_ = std::move(name);
        d.text_ = std::move(text);
        try {
            d.value_ = json::parse(d.text_);
        } catch (const json::parse_error &e) {
            const auto [line, col] = d.locate_byte(e.byte);
            throw InvalidInput(d.name_ + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " +
                               "malformed JSON (" + std::string(e.what()) + ")");
        }
        if (!d.value_.is_object()) d.fail("", "top-level value must be an object");
        return d;
    }

    [[nodiscard]] const json &root() const { return value_; }

    [[nodiscard]] const json &field(const std::string &key) const {
        if (!value_.contains(key)) fail("", "missing field '" + key + "'");
        return value_.at(key);
    }

    [[nodiscard]] bool has(const std::string &key) const { return value_.contains(key); }

    [[noreturn]] void fail(const std::string &key, const std::string &msg) const {
        std::size_t line = 1, col = 1;
        if (!key.empty()) {
            const std::size_t pos = text_.find("\"" + key + "\"");
            if (pos != std::string::npos) std::tie(line, col) = locate_byte(pos + 1);
        }
        throw InvalidInput(name_ + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
    }

    [[nodiscard]] long long integer(const std::string &key) const {
        const json &v = field(key);
        if (!v.is_number_integer()) fail(key, "field '" + key + "' must be an integer");
        return v.get<long long>();
    }

    [[nodiscard]] std::vector<double> reals(const std::string &key) const { return reals_of(field(key), key); }

    [[nodiscard]] std::vector<double> reals_of(const json &v, const std::string &key) const {
        if (!v.is_array()) fail(key, "field '" + key + "' must be an array of numbers");
        std::vector<double> out;
        out.reserve(v.size());
        for (const json &x : v) {
            if (!x.is_number()) fail(key, "field '" + key + "' must contain only numbers");
            out.push_back(x.get<double>());
        }
        return out;
    }

  private:
    [[nodiscard]] std::pair<std::size_t, std::size_t> locate_byte(std::size_t byte) const {
        std::size_t line = 1, col = 1;
        const std::size_t end = std::min(byte > 0 ? byte - 1 : 0, text_.size());
        for (std::size_t i = 0; i < end; ++i) {
            if (text_[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        return {line, col};
    }

    std::string name_;
    std::string text_;
    json value_;
};

inline Matrix matrix_from_row_major(const std::vector<double> &v, Eigen::Index rows, Eigen::Index cols) {
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = v[static_cast<std::size_t>(i * cols + j)];
    return m;
}

inline std::vector<double> row_major(const Matrix &m) {
    std::vector<double> v;
    v.reserve(static_cast<std::size_t>(m.size()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) v.push_back(m(i, j));
    return v;
}

inline SampledPath path_from_document(const Document &d, double tol = kStructuralTol) {
    const long long dim = d.integer("dim");
    if (dim < 2 || dim % 2 != 0) d.fail("dim", "field 'dim' must be a positive even integer");
    std::vector<double> times = d.reals("times");
    const json &mats = d.field("matrices");
    if (!mats.is_array()) d.fail("matrices", "field 'matrices' must be an array");
    if (mats.size() != times.size()) d.fail("matrices", "'matrices' and 'times' differ in length");
    std::vector<Matrix> out;
    out.reserve(mats.size());
    for (const json &m : mats) {
        const std::vector<double> v = d.reals_of(m, "matrices");
        if (v.size() != static_cast<std::size_t>(dim * dim)) {
            d.fail("matrices", "each matrix needs " + std::to_string(dim * dim) + " entries");
        }
        out.push_back(matrix_from_row_major(v, dim, dim));
    }
    try {
        return SampledPath::from_samples(std::move(times), std::move(out), tol);
    } catch (const InvalidInput &e) {
        d.fail("matrices", e.what());
    }
}

inline SampledPath read_path(const std::string &file, double tol = kStructuralTol) {
    return path_from_document(Document::load(file), tol);
}

inline json path_to_json(const SampledPath &x) {
    json j;
    j["dim"] = x.dim();
    j["times"] = x.times();
    json mats = json::array();
    for (const Matrix &m : x.matrices()) mats.push_back(row_major(m));
    j["matrices"] = std::move(mats);
    return j;
}

inline std::vector<std::size_t> grid_shape_of(const Document &d) {
    const json &s = d.field("grid_shape");
    if (!s.is_array() || s.empty()) d.fail("grid_shape", "field 'grid_shape' must be a non-empty array");
    std::vector<std::size_t> shape;
    for (const json &x : s) {
        if (!x.is_number_integer() || x.get<long long>() <= 0) {
            d.fail("grid_shape", "field 'grid_shape' must contain positive integers");
        }
        shape.push_back(static_cast<std::size_t>(x.get<long long>()));
    }
    return shape;
}

inline quant::LeafFunction grid_from_document(const Document &d) {
    std::vector<std::size_t> shape = grid_shape_of(d);
    try {
        return {std::move(shape), d.reals("values")};
    } catch (const InvalidInput &e) {
        d.fail("values", e.what());
    }
}

inline quant::LeafFunction read_grid(const std::string &file) { return grid_from_document(Document::load(file)); }

inline json grid_to_json(const quant::LeafFunction &f) {
    json j;
    j["grid_shape"] = f.grid_shape();
    j["values"] = f.values();
    return j;
}

struct Family {
    std::vector<quant::LeafFunction> slices;
    std::vector<double> times;
    std::vector<double> weights;
};

inline Family read_family(const std::string &file) {
    const Document d = Document::load(file);
    const std::vector<std::size_t> shape = grid_shape_of(d);
    const json &vals = d.field("values");
    if (!vals.is_array()) d.fail("values", "field 'values' must be an array of slices");
    Family fam;
    try {
        for (const json &slice : vals) fam.slices.emplace_back(shape, d.reals_of(slice, "values"));
    } catch (const InvalidInput &e) {
        d.fail("values", e.what());
    }
    if (d.has("times")) fam.times = d.reals("times");
    if (d.has("weights")) fam.weights = d.reals("weights");
    return fam;
}

inline json family_to_json(const Family &fam) {
    json j;
    j["grid_shape"] = fam.slices.front().grid_shape();
    json vals = json::array();
    for (const auto &s : fam.slices) vals.push_back(s.values());
    j["values"] = std::move(vals);
    if (!fam.times.empty()) j["times"] = fam.times;
    if (!fam.weights.empty()) j["weights"] = fam.weights;
    return j;
}

inline Matrix read_matrix(const std::string &file) {
    const Document d = Document::load(file);
    const long long dim = d.integer("dim");
    if (dim < 1) d.fail("dim", "field 'dim' must be positive");
    const std::vector<double> v = d.reals("matrix");
    if (v.size() != static_cast<std::size_t>(dim * dim)) d.fail("matrix", "'matrix' needs dim*dim entries");
    return matrix_from_row_major(v, dim, dim);
}

inline CMatrix read_hermitian(const std::string &file) {
    const Document d = Document::load(file);
    const long long n = d.integer("n");
    if (n < 1) d.fail("n", "field 'n' must be positive");
    const std::vector<double> re = d.reals("real");
    const std::vector<double> im = d.has("imag") ? d.reals("imag") : std::vector<double>(re.size(), 0.0);
    if (re.size() != static_cast<std::size_t>(n * n)) d.fail("real", "'real' needs n*n entries");
    if (im.size() != re.size()) d.fail("imag", "'imag' needs n*n entries");
    CMatrix c(n, n);
    c.real() = matrix_from_row_major(re, n, n);
    c.imag() = matrix_from_row_major(im, n, n);
    return c;
}

inline void write_text(const std::string &file, const std::string &text) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw InvalidInput(file + ":0:0: cannot open for writing");
    out << text;
}

}  // namespace symporder::io
