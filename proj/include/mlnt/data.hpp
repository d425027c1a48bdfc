#pragma once

#include <charconv>
#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mlnt/error.hpp"
#include "mlnt/matrix.hpp"
#include "mlnt/rng.hpp"

namespace mlnt {

enum class SplitTag { Train, Val, Test };

inline const char* split_tag_name(SplitTag t) {
    switch (t) {
        case SplitTag::Train: return "train";
        case SplitTag::Val: return "val";
        case SplitTag::Test: return "test";
    }
    return "?";
}

/// A labeled sample collection. `labels` is what the training loop sees; for
/// a corrupted train split the pre-corruption labels are kept in
/// `clean_labels` for bookkeeping and are never read during training.
struct Dataset {
    Matrix features;                         // [n x d]
    std::vector<int> labels;                 // in [0, c)
    int num_classes = 0;
    std::vector<std::int64_t> ids;           // unique sample identifiers
    SplitTag split_tag = SplitTag::Train;
    std::optional<std::vector<int>> clean_labels;

    int n() const { return features.rows; }
    int dim() const { return features.cols; }

    void validate() const {
        if (num_classes < 1) throw InputError("Dataset: num_classes must be >= 1");
        if (static_cast<int>(labels.size()) != features.rows || static_cast<int>(ids.size()) != features.rows)
            throw DimensionError("Dataset: row count mismatch between features, labels and ids");
        for (int y : labels)
            if (y < 0 || y >= num_classes)
                throw InputError("Dataset: label " + std::to_string(y) + " out of range [0," +
                                 std::to_string(num_classes) + ")");
        std::set<std::int64_t> seen(ids.begin(), ids.end());
        if (seen.size() != ids.size()) throw InputError("Dataset: duplicate sample ids");
        if (!features.all_finite()) throw NumericError("Dataset: non-finite features");
        if (clean_labels && clean_labels->size() != labels.size())
            throw DimensionError("Dataset: clean label count mismatch");
    }
};

/// One-hot encode labels into a [n x c] matrix.
inline Matrix one_hot(const std::vector<int>& labels, int c) {
    if (labels.empty()) throw InputError("one_hot: empty label list");
    Matrix Y(static_cast<int>(labels.size()), c);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const int y = labels[i];
        if (y < 0 || y >= c) throw InputError("one_hot: label out of range");
        Y(static_cast<int>(i), y) = 1.0;
    }
    return Y;
}

struct Batch {
    Matrix X;                        // [k x d]
    Matrix Y;                        // [k x c] one-hot
    std::vector<int> label_ids;      // class ids, same order as rows
    std::vector<std::int64_t> ids;   // sample ids
};

inline Batch gather_batch(const Dataset& ds, const std::vector<int>& indices) {
    if (indices.empty()) throw InputError("gather_batch: empty index list");
    Batch b;
    b.X = Matrix(static_cast<int>(indices.size()), ds.dim());
    b.label_ids.reserve(indices.size());
    b.ids.reserve(indices.size());
    for (std::size_t r = 0; r < indices.size(); ++r) {
        const int i = indices[r];
        if (i < 0 || i >= ds.n()) throw InputError("gather_batch: index out of range");
        const double* src = ds.features.row_ptr(i);
        double* dst = b.X.row_ptr(static_cast<int>(r));
        for (int j = 0; j < ds.dim(); ++j) dst[j] = src[j];
        b.label_ids.push_back(ds.labels[static_cast<std::size_t>(i)]);
        b.ids.push_back(ds.ids[static_cast<std::size_t>(i)]);
    }
    b.Y = one_hot(b.label_ids, ds.num_classes);
    return b;
}

// ---------------------------------------------------------------------------
// CSV persistence. Schema: header "id,label,f0,...,f{d-1}", one sample per
// line. Floats are written with 17 significant digits so load(save(x)) == x.
// ---------------------------------------------------------------------------

inline void save_dataset(const Dataset& ds, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("save_dataset: cannot open " + path);
    out << "id,label";
    for (int j = 0; j < ds.dim(); ++j) out << ",f" << j;
    out << "\n";
    char buf[64];
    for (int i = 0; i < ds.n(); ++i) {
        out << ds.ids[static_cast<std::size_t>(i)] << "," << ds.labels[static_cast<std::size_t>(i)];
        const double* row = ds.features.row_ptr(i);
        for (int j = 0; j < ds.dim(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", row[j]);
            out << "," << buf;
        }
        out << "\n";
    }
    if (!out) throw IoError("save_dataset: write failed for " + path);
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    fields.push_back(cur);
    return fields;
}

inline double parse_double_field(const std::string& s, int line_no) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing chars");
        return v;
    } catch (const std::exception&) {
        throw ParseError("load_dataset: bad float '" + s + "' on line " + std::to_string(line_no));
    }
}

inline std::int64_t parse_int_field(const std::string& s, int line_no) {
    std::int64_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw ParseError("load_dataset: bad integer '" + s + "' on line " + std::to_string(line_no));
    return v;
}

} // namespace detail

inline Dataset load_dataset(const std::string& path, int num_classes, SplitTag tag) {
    std::ifstream in(path);
    if (!in) throw IoError("load_dataset: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw ParseError("load_dataset: empty file " + path);
    const auto header = detail::split_csv_line(line);
    if (header.size() < 3 || header[0] != "id" || header[1] != "label")
        throw ParseError("load_dataset: bad header in " + path);
    const int d = static_cast<int>(header.size()) - 2;
    for (int j = 0; j < d; ++j)
        if (header[static_cast<std::size_t>(j) + 2] != "f" + std::to_string(j))
            throw ParseError("load_dataset: bad feature column name in " + path);

    std::vector<std::int64_t> ids;
    std::vector<int> labels;
    std::vector<double> flat;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = detail::split_csv_line(line);
        if (static_cast<int>(fields.size()) != d + 2)
            throw ParseError("load_dataset: wrong field count on line " + std::to_string(line_no));
        ids.push_back(detail::parse_int_field(fields[0], line_no));
        labels.push_back(static_cast<int>(detail::parse_int_field(fields[1], line_no)));
        for (int j = 0; j < d; ++j)
            flat.push_back(detail::parse_double_field(fields[static_cast<std::size_t>(j) + 2], line_no));
    }
    if (ids.empty()) throw ParseError("load_dataset: no samples in " + path);

    Dataset ds;
    ds.features = Matrix(static_cast<int>(ids.size()), d);
    ds.features.values = std::move(flat);
    ds.labels = std::move(labels);
    ds.ids = std::move(ids);
    ds.num_classes = num_classes;
    ds.split_tag = tag;
    ds.validate();
    return ds;
}

// ---------------------------------------------------------------------------
// Desk-scale synthetic benchmarks.
// ---------------------------------------------------------------------------

enum class BenchmarkGenerator { GaussianBlobs, ConcentricRings, ImagePatches };

struct SyntheticBenchmarkSpec {
    BenchmarkGenerator generator = BenchmarkGenerator::GaussianBlobs;
    int n_train = 4000; // training pool; 10% of it becomes the validation split
    int n_test = 2000;
    int d = 8;
    int c = 4;
    double separation = 4.0;
    std::uint64_t seed = 1;

    void validate() const {
        if (c < 2) throw InputError("SyntheticBenchmarkSpec: c must be >= 2");
        if (separation <= 0.0) throw InputError("SyntheticBenchmarkSpec: separation must be > 0");
        if (n_train < c || n_test < c) throw InputError("SyntheticBenchmarkSpec: too few samples");
        if (d < 1) throw InputError("SyntheticBenchmarkSpec: d must be >= 1");
        if (generator == BenchmarkGenerator::GaussianBlobs && c > 2 * d)
            throw InputError("SyntheticBenchmarkSpec: gaussian blobs need c <= 2*d");
        if (generator == BenchmarkGenerator::ConcentricRings && d != 2)
            throw InputError("SyntheticBenchmarkSpec: concentric rings need d == 2");
    }
};

struct BenchmarkSplits {
    Dataset train;
    Dataset val;
    Dataset test;
};

namespace detail {

/// Class centers for the blob generator: +/- axis directions scaled so the
/// pairwise center distance equals `separation` (unit noise per dimension).
inline std::vector<std::vector<double>> blob_centers(int c, int d, double separation) {
    std::vector<std::vector<double>> centers;
    const double a = separation / std::sqrt(2.0);
    for (int j = 0; j < c; ++j) {
        std::vector<double> ctr(static_cast<std::size_t>(d), 0.0);
        if (j < d)
            ctr[static_cast<std::size_t>(j)] = a;
        else
            ctr[static_cast<std::size_t>(j - d)] = -a;
        centers.push_back(std::move(ctr));
    }
    return centers;
}

/// Class templates for the image-patch generator: smoothed random sqrt(d) x
/// sqrt(d)-ish patterns, rescaled to the requested separation.
inline std::vector<std::vector<double>> patch_centers(int c, int d, double separation, RngStream& rng) {
    std::vector<std::vector<double>> centers;
    const int side = std::max(1, static_cast<int>(std::lround(std::sqrt(static_cast<double>(d)))));
    for (int j = 0; j < c; ++j) {
        std::vector<double> raw(static_cast<std::size_t>(d));
        for (double& v : raw) v = rng.normal();
        // 3x3 box blur over the (approximate) patch grid
        std::vector<double> smooth(raw.size(), 0.0);
        for (int i = 0; i < d; ++i) {
            const int r = i / side, col = i % side;
            double acc = 0.0;
            int cnt = 0;
            for (int dr = -1; dr <= 1; ++dr)
                for (int dc = -1; dc <= 1; ++dc) {
                    const int rr = r + dr, cc = col + dc;
                    const int idx = rr * side + cc;
                    if (rr < 0 || cc < 0 || cc >= side || idx >= d) continue;
                    acc += raw[static_cast<std::size_t>(idx)];
                    ++cnt;
                }
            smooth[static_cast<std::size_t>(i)] = acc / cnt;
        }
        double nrm = 0.0;
        for (double v : smooth) nrm += v * v;
        nrm = std::sqrt(nrm);
        const double scale = separation / std::sqrt(2.0) / std::max(nrm, 1e-12);
        for (double& v : smooth) v *= scale;
        centers.push_back(std::move(smooth));
    }
    return centers;
}

inline Dataset sample_split(const SyntheticBenchmarkSpec& spec,
                            const std::vector<std::vector<double>>& centers, int n, SplitTag tag,
                            std::int64_t id_base, RngStream& rng) {
    // class-balanced: remainder goes to the lowest class ids
    std::vector<int> labels;
    labels.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) labels.push_back(i % spec.c);
    rng.shuffle(labels);

    Dataset ds;
    ds.features = Matrix(n, spec.d);
    ds.labels = labels;
    ds.num_classes = spec.c;
    ds.split_tag = tag;
    for (int i = 0; i < n; ++i) {
        ds.ids.push_back(id_base + i);
        double* row = ds.features.row_ptr(i);
        const int y = labels[static_cast<std::size_t>(i)];
        if (spec.generator == BenchmarkGenerator::ConcentricRings) {
            const double radius = spec.separation * (y + 1) + rng.normal();
            const double angle = 2.0 * 3.14159265358979323846 * rng.uniform();
            row[0] = radius * std::cos(angle);
            row[1] = radius * std::sin(angle);
        } else {
            const std::vector<double>& ctr = centers[static_cast<std::size_t>(y)];
            for (int j = 0; j < spec.d; ++j) row[j] = ctr[static_cast<std::size_t>(j)] + rng.normal();
        }
    }
    return ds;
}

inline Dataset take_rows(const Dataset& src, const std::vector<int>& rows, SplitTag tag) {
    Dataset out;
    out.features = Matrix(static_cast<int>(rows.size()), src.dim());
    out.num_classes = src.num_classes;
    out.split_tag = tag;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const int i = rows[r];
        const double* s = src.features.row_ptr(i);
        double* d = out.features.row_ptr(static_cast<int>(r));
        for (int j = 0; j < src.dim(); ++j) d[j] = s[j];
        out.labels.push_back(src.labels[static_cast<std::size_t>(i)]);
        out.ids.push_back(src.ids[static_cast<std::size_t>(i)]);
    }
    return out;
}

} // namespace detail

/// Deterministic desk-scale benchmark: a training pool split 90/10 into
/// train/val, plus a separate test set. Pure function of the spec.
inline BenchmarkSplits make_synthetic_benchmark(const SyntheticBenchmarkSpec& spec) {
    spec.validate();
    RngStream rng = RngStream::named(spec.seed, "benchmark");

    std::vector<std::vector<double>> centers;
    if (spec.generator == BenchmarkGenerator::GaussianBlobs)
        centers = detail::blob_centers(spec.c, spec.d, spec.separation);
    else if (spec.generator == BenchmarkGenerator::ImagePatches)
        centers = detail::patch_centers(spec.c, spec.d, spec.separation, rng);

    Dataset pool = detail::sample_split(spec, centers, spec.n_train, SplitTag::Train, 0, rng);
    Dataset test = detail::sample_split(spec, centers, spec.n_test, SplitTag::Test, spec.n_train, rng);

    const int n_val = spec.n_train / 10; // floor(0.1 * pool)
    std::vector<int> order(static_cast<std::size_t>(spec.n_train));
    for (int i = 0; i < spec.n_train; ++i) order[static_cast<std::size_t>(i)] = i;
    rng.shuffle(order);

    BenchmarkSplits splits;
    splits.val = detail::take_rows(pool, {order.begin(), order.begin() + n_val}, SplitTag::Val);
    splits.train = detail::take_rows(pool, {order.begin() + n_val, order.end()}, SplitTag::Train);
    splits.test = std::move(test);
    splits.train.validate();
    splits.val.validate();
    splits.test.validate();
    return splits;
}

} // namespace mlnt
