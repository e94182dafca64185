// Copyright 2026 The qformer Authors.

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "qformer/io.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

#include "qformer/error.hpp"

namespace qformer {

namespace {

auto trim(const std::string &s) -> std::string {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) {
        return "";
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

auto parse_real(const std::string &text) -> double {
    double v = 0.0;
    const char *begin = text.data();
    const char *end = begin + text.size();
    if (begin != end && *begin == '+') {
        ++begin;
    }
    const auto res = std::from_chars(begin, end, v);
    require(res.ec == std::errc() && res.ptr == end && begin != end,
            ErrorKind::Parse, "cannot parse number '" + text + "'");
    require(std::isfinite(v), ErrorKind::Parse, "non-finite entry '" + text + "'");
    return v;
}

auto split(const std::string &line, char sep) -> std::vector<std::string> {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(line);
    while (std::getline(is, cur, sep)) {
        out.push_back(trim(cur));
    }
    if (!line.empty() && line.back() == sep) {
        out.emplace_back();
    }
    return out;
}

auto read_file(const std::string &path) -> std::string {
    require(std::filesystem::is_regular_file(path), ErrorKind::FileNotFound,
            "no such file: " + path);
    std::ifstream in(path, std::ios::binary);
    require(in.good(), ErrorKind::FileNotFound, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

auto parse_entry(const std::string &raw) -> Complex {
    const std::string text = trim(raw);
    require(!text.empty(), ErrorKind::Parse, "empty entry");
    const char last = text.back();
    if (last != 'i' && last != 'j') {
        return {parse_real(text), 0.0};
    }
    const std::string body = text.substr(0, text.size() - 1);
    // Split at the last sign that is not leading and not an exponent sign.
    std::size_t cut = std::string::npos;
    for (std::size_t k = body.size(); k-- > 1;) {
        if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' &&
            body[k - 1] != 'E') {
            cut = k;
            break;
        }
    }
    auto imag_of = [](const std::string &s) {
        if (s.empty() || s == "+") {
            return 1.0;
        }
        if (s == "-") {
            return -1.0;
        }
        return parse_real(s);
    };
    if (cut == std::string::npos) {
        return {0.0, imag_of(body)};
    }
    return {parse_real(body.substr(0, cut)), imag_of(body.substr(cut))};
}

auto parse_matrix_csv(const std::string &content) -> DenseMatrix {
    std::istringstream is(content);
    std::string line;
    std::vector<std::vector<Complex>> rows;
    long long want_rows = -1;
    long long want_cols = -1;
    bool first = true;
    while (std::getline(is, line)) {
        const std::string t = trim(line);
        if (t.empty()) {
            first = false;
            continue;
        }
        if (t.front() == '#') {
            require(first, ErrorKind::Parse,
                    "comment lines are only allowed as the first line");
            std::istringstream hs(t.substr(1));
            require(static_cast<bool>(hs >> want_rows >> want_cols) &&
                        want_rows > 0 && want_cols > 0,
                    ErrorKind::Parse, "header must read '# rows cols'");
            first = false;
            continue;
        }
        first = false;
        std::vector<Complex> row;
        for (const auto &cell : split(t, ',')) {
            row.push_back(parse_entry(cell));
        }
        require(rows.empty() || row.size() == rows.front().size(),
                ErrorKind::Parse, "ragged rows in matrix file");
        rows.push_back(std::move(row));
    }
    require(!rows.empty(), ErrorKind::Parse, "matrix file has no rows");
    const auto r = static_cast<Index>(rows.size());
    const auto c = static_cast<Index>(rows.front().size());
    if (want_rows >= 0) {
        require(want_rows == r && want_cols == c, ErrorKind::Parse,
                "header shape differs from the data");
    }
    DenseMatrix m(r, c);
    for (Index i = 0; i < r; ++i) {
        for (Index k = 0; k < c; ++k) {
            m(i, k) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
        }
    }
    return m;
}

auto read_matrix_csv(const std::string &path) -> DenseMatrix {
    const std::string content = read_file(path);
    try {
        return parse_matrix_csv(content);
    } catch (const Error &e) {
        throw Error(e.kind(), path + ": " + e.what());
    }
}

auto read_real_matrix_csv(const std::string &path) -> RealMatrix {
    const DenseMatrix m = read_matrix_csv(path);
    require(m.imag().cwiseAbs().maxCoeff() == 0.0, ErrorKind::Parse,
            path + ": complex entries are not supported here");
    return m.real();
}

auto format_matrix_csv(const RealMatrix &a) -> std::string {
    std::ostringstream os;
    os << "# " << a.rows() << ' ' << a.cols() << '\n';
    os << std::setprecision(17);
    for (Index i = 0; i < a.rows(); ++i) {
        for (Index k = 0; k < a.cols(); ++k) {
            os << (k ? "," : "") << a(i, k);
        }
        os << '\n';
    }
    return os.str();
}

void write_text(const std::string &path, const std::string &content) {
    std::ofstream out(path, std::ios::binary);
    require(out.good(), ErrorKind::FileNotFound, "cannot write " + path);
    out << content;
}

auto read_weights_dir(const std::string &dir) -> ClassicalWeights {
    require(std::filesystem::is_directory(dir), ErrorKind::FileNotFound,
            "no such directory: " + dir);
    const std::filesystem::path base(dir);
    ClassicalWeights w;
    w.S = read_real_matrix_csv((base / "S.csv").string());
    w.Wq = read_real_matrix_csv((base / "Wq.csv").string());
    w.Wk = read_real_matrix_csv((base / "Wk.csv").string());
    w.Wv = read_real_matrix_csv((base / "Wv.csv").string());
    w.M1 = read_real_matrix_csv((base / "M1.csv").string());
    w.M2 = read_real_matrix_csv((base / "M2.csv").string());
    w.alpha0 = std::sqrt(static_cast<double>(w.S.cols()));
    try {
        check_shapes(w);
    } catch (const Error &e) {
        throw Error(ErrorKind::Parse, dir + ": " + e.what());
    }
    return w;
}

} // namespace qformer
