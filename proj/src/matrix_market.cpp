#include "cgest/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace cgest {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

bool next_data_line(std::istream& in, std::string& line) {
    while (std::getline(in, line)) {
        std::size_t i = 0;
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i == line.size()) continue;   // blank
        if (line[i] == '%') continue;     // comment
        return true;
    }
    return false;
}

}  // namespace

MatrixMarketResult read_matrix_market(std::istream& in) {
    std::string header;
    if (!std::getline(in, header)) throw ParseError("matrix market: empty stream");

    std::istringstream hs(header);
    std::string banner, object, format, field, symmetry;
    hs >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%MatrixMarket" || lower(object) != "matrix") {
        throw ParseError("matrix market: malformed header: " + header);
    }
    format = lower(format);
    field = lower(field);
    symmetry = lower(symmetry);
    if (format != "coordinate") {
        throw ParseError("matrix market: only coordinate format supported, got '" + format + "'");
    }
    if (field != "real") {
        throw ParseError("matrix market: only real field supported, got '" + field + "'");
    }
    if (symmetry != "symmetric" && symmetry != "general") {
        throw ParseError("matrix market: only symmetric|general supported, got '" + symmetry + "'");
    }
    const bool symmetric = symmetry == "symmetric";

    std::string line;
    if (!next_data_line(in, line)) throw ParseError("matrix market: missing size line");
    index_t rows = 0, cols = 0, nnz = 0;
    {
        std::istringstream ls(line);
        if (!(ls >> rows >> cols >> nnz)) throw ParseError("matrix market: malformed size line");
    }
    if (rows != cols) throw ParseError("matrix market: matrix must be square");
    if (rows <= 0) throw ParseError("matrix market: order must be positive");

    std::vector<Triplet> entries;
    entries.reserve(static_cast<std::size_t>(symmetric ? 2 * nnz : nnz));
    for (index_t e = 0; e < nnz; ++e) {
        if (!next_data_line(in, line)) throw ParseError("matrix market: unexpected end of entries");
        std::istringstream ls(line);
        index_t i = 0, j = 0;
        double v = 0.0;
        if (!(ls >> i >> j >> v)) throw ParseError("matrix market: malformed entry: " + line);
        if (i < 1 || i > rows || j < 1 || j > cols) {
            throw ParseError("matrix market: index out of range: " + line);
        }
        --i;
        --j;
        if (symmetric) {
            if (j > i) throw ParseError("matrix market: symmetric file stores an upper-triangle entry");
            entries.push_back({i, j, v});
            if (i != j) entries.push_back({j, i, v});
        } else {
            entries.push_back({i, j, v});
        }
    }

    MatrixMarketResult result;
    result.matrix = CsrMatrix::from_triplets(rows, std::move(entries));
    if (!symmetric && !result.matrix.is_symmetric()) {
        throw ParseError("matrix market: general input is not symmetric");
    }
    for (index_t i = 0; i < rows; ++i) {
        if (result.matrix.at(i, i) == 0.0) {
            result.missing_diagonal = true;
            break;
        }
    }
    return result;
}

MatrixMarketResult read_matrix_market_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open matrix file: " + path);
    return read_matrix_market(in);
}

void write_matrix_market(std::ostream& out, const CsrMatrix& A) {
    index_t lower_nnz = 0;
    for (index_t i = 0; i < A.n; ++i) {
        for (index_t p = A.row_offsets[static_cast<std::size_t>(i)];
             p < A.row_offsets[static_cast<std::size_t>(i) + 1]; ++p) {
            if (A.col_indices[static_cast<std::size_t>(p)] <= i) ++lower_nnz;
        }
    }
    out << "%%MatrixMarket matrix coordinate real symmetric\n";
    out << A.n << " " << A.n << " " << lower_nnz << "\n";
    char buf[64];
    for (index_t i = 0; i < A.n; ++i) {
        for (index_t p = A.row_offsets[static_cast<std::size_t>(i)];
             p < A.row_offsets[static_cast<std::size_t>(i) + 1]; ++p) {
            const index_t j = A.col_indices[static_cast<std::size_t>(p)];
            if (j > i) continue;
            std::snprintf(buf, sizeof(buf), "%.17g", A.values[static_cast<std::size_t>(p)]);
            out << (i + 1) << " " << (j + 1) << " " << buf << "\n";
        }
    }
}

void write_matrix_market_file(const std::string& path, const CsrMatrix& A) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open output file: " + path);
    write_matrix_market(out, A);
}

DenseVector read_rhs(const RhsSpec& spec, index_t n, std::uint64_t seed) {
    if (n <= 0) throw std::invalid_argument("read_rhs: order must be positive");
    DenseVector b(static_cast<std::size_t>(n), 0.0);

    switch (spec.kind) {
        case RhsKind::equal: {
            const double v = 1.0 / std::sqrt(static_cast<double>(n));
            std::fill(b.begin(), b.end(), v);
            break;
        }
        case RhsKind::uniform_random: {
            std::mt19937_64 gen(seed);
            for (double& x : b) {
                // uniform on [0,1) with 53 random bits, mapped to (-1,1)
                const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
                x = 2.0 * u - 1.0;
            }
            const double nrm = norm2(b);
            if (nrm == 0.0) throw std::runtime_error("read_rhs: zero random vector");
            for (double& x : b) x /= nrm;
            break;
        }
        case RhsKind::file: {
            std::ifstream in(spec.path);
            if (!in) throw ParseError("cannot open rhs file: " + spec.path);
            index_t count = 0;
            double v = 0.0;
            while (in >> v) {
                if (count >= n) throw ParseError("rhs file longer than matrix order");
                b[static_cast<std::size_t>(count++)] = v;
            }
            if (count != n) throw ParseError("rhs file shorter than matrix order");
            break;
        }
    }
    if (!all_finite(b)) throw std::runtime_error("read_rhs: non-finite entries");
    if (norm2_squared(b) == 0.0) throw std::runtime_error("read_rhs: zero right-hand side");
    return b;
}

}  // namespace cgest
