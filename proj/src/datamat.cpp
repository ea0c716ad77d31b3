#include "transid/datamat.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <cmath>
#include <sstream>
#include <string>

#include <json.hpp>

#include "transid/errors.hpp"

namespace transid {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> split_cells(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    for (auto& c : cells) {
        const auto b = c.find_first_not_of(" \t\r");
        const auto e = c.find_last_not_of(" \t\r");
        c = b == std::string::npos ? std::string() : c.substr(b, e - b + 1);
    }
    return cells;
}

double parse_number(const std::string& cell, std::size_t line_no, std::size_t col) {
    double v = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (cell.empty() || ec != std::errc() || ptr != last || !std::isfinite(v)) {
        throw InputError("line " + std::to_string(line_no) + ", column " + std::to_string(col + 1) +
                         ": non-numeric cell '" + cell + "'");
    }
    return v;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

void Trajectory::validate() const {
    if (n < 1) throw InputError("trajectory state dimension must be >= 1");
    if (m < 0) throw InputError("trajectory input dimension must be >= 0");
    if (states.size() != inputs.size() + 1) {
        throw InputError("trajectory needs exactly one more state than inputs (states=" +
                         std::to_string(states.size()) + ", inputs=" +
                         std::to_string(inputs.size()) + ")");
    }
    for (std::size_t k = 0; k < states.size(); ++k) {
        if (states[k].size() != n) {
            throw InputError("state " + std::to_string(k) + " has length " +
                             std::to_string(states[k].size()) + ", expected " + std::to_string(n));
        }
        if (!states[k].allFinite()) throw InputError("state " + std::to_string(k) + " is not finite");
    }
    for (std::size_t k = 0; k < inputs.size(); ++k) {
        if (inputs[k].size() != m) {
            throw InputError("input " + std::to_string(k) + " has length " +
                             std::to_string(inputs[k].size()) + ", expected " + std::to_string(m));
        }
        if (!inputs[k].allFinite()) throw InputError("input " + std::to_string(k) + " is not finite");
    }
}

Eigen::VectorXd snapshot(const Trajectory& traj, std::size_t k) {
    if (k >= traj.length()) throw InputError("snapshot index out of range");
    Eigen::VectorXd h(2 * traj.n + traj.m);
    h << traj.states[k], traj.inputs[k], traj.states[k + 1];
    return h;
}

StackedData stack(const Trajectory& traj) { return stack(std::span<const Trajectory>(&traj, 1)); }

StackedData stack(std::span<const Trajectory> trajectories) {
    if (trajectories.empty()) throw InputError("stack: no trajectories");
    StackedData out;
    out.n = trajectories.front().n;
    out.m = trajectories.front().m;
    Eigen::Index total = 0;
    for (const auto& t : trajectories) {
        t.validate();
        if (t.n != out.n || t.m != out.m) throw InputError("stack: trajectories disagree on (n, m)");
        total += static_cast<Eigen::Index>(t.length());
    }
    if (total == 0) throw InputError("stack: trajectory has no input samples");
    out.matrix.resize(out.ambient_dim(), total);
    Eigen::Index col = 0;
    for (const auto& t : trajectories) {
        for (std::size_t k = 0; k < t.length(); ++k) out.matrix.col(col++) = snapshot(t, k);
    }
    return out;
}

bool persistency_order(std::span<const Eigen::VectorXd> inputs, int order, const RankPolicy& policy) {
    if (order < 1) throw InputError("persistency order must be positive");
    if (inputs.size() < static_cast<std::size_t>(order)) {
        throw InputError("input sequence of length " + std::to_string(inputs.size()) +
                         " is shorter than the order " + std::to_string(order));
    }
    const Eigen::Index m = inputs.front().size();
    if (m == 0) throw InputError("persistency of excitation needs at least one input channel");
    const Eigen::Index cols = static_cast<Eigen::Index>(inputs.size()) - order + 1;
    Eigen::MatrixXd hankel(m * order, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
        for (int d = 0; d < order; ++d) {
            const auto& u = inputs[static_cast<std::size_t>(j + d)];
            if (u.size() != m) throw InputError("inputs have inconsistent lengths");
            hankel.block(d * m, j, m, 1) = u;
        }
    }
    if (cols < m * order) return false;
    const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(hankel).singularValues();
    return policy.rank(sv, hankel.rows(), hankel.cols()) == m * order;
}

TrajectoryFormat format_from_path(const std::filesystem::path& path) {
    return path.extension() == ".json" ? TrajectoryFormat::json : TrajectoryFormat::csv;
}

Trajectory parse_trajectory_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<std::pair<std::size_t, std::string>> lines;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        lines.emplace_back(line_no, line);
    }
    if (lines.empty()) throw InputError("trajectory CSV is empty");

    const auto header = split_cells(lines.front().second);
    if (header.empty() || header.front() != "t") {
        throw InputError("line " + std::to_string(lines.front().first) +
                         ": header must start with 't'");
    }
    Trajectory traj;
    std::size_t idx = 1;
    while (idx < header.size() && header[idx] == "x" + std::to_string(traj.n + 1)) {
        ++traj.n;
        ++idx;
    }
    while (idx < header.size() && header[idx] == "u" + std::to_string(traj.m + 1)) {
        ++traj.m;
        ++idx;
    }
    if (idx != header.size() || traj.n == 0) {
        throw InputError("line " + std::to_string(lines.front().first) +
                         ": malformed header, expected t,x1..xn,u1..um");
    }
    if (lines.size() < 2) throw InputError("trajectory CSV has a header but no state rows");

    const std::size_t width = header.size();
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const auto& [ln, text_line] = lines[r];
        const auto cells = split_cells(text_line);
        if (cells.size() != width) {
            throw InputError("line " + std::to_string(ln) + ": expected " + std::to_string(width) +
                             " cells, found " + std::to_string(cells.size()));
        }
        const double t = parse_number(cells[0], ln, 0);
        if (t != static_cast<double>(r - 1)) {
            throw InputError("line " + std::to_string(ln) + ": time index " + cells[0] +
                             " out of sequence, expected " + std::to_string(r - 1));
        }
        Eigen::VectorXd x(traj.n);
        for (int i = 0; i < traj.n; ++i) x(i) = parse_number(cells[1 + i], ln, 1 + i);
        traj.states.push_back(std::move(x));

        const bool last = r + 1 == lines.size();
        bool any_input = false;
        bool all_input = true;
        for (int i = 0; i < traj.m; ++i) {
            const bool filled = !cells[1 + traj.n + i].empty();
            any_input = any_input || filled;
            all_input = all_input && filled;
        }
        if (last) {
            if (any_input) {
                throw InputError("line " + std::to_string(ln) +
                                 ": final row carries the terminal state and must leave input cells empty");
            }
        } else {
            if (!all_input) throw InputError("line " + std::to_string(ln) + ": missing input cells");
            Eigen::VectorXd u(traj.m);
            for (int i = 0; i < traj.m; ++i) {
                u(i) = parse_number(cells[1 + traj.n + i], ln, 1 + traj.n + i);
            }
            traj.inputs.push_back(std::move(u));
        }
    }
    traj.validate();
    return traj;
}

std::string format_trajectory_csv(const Trajectory& traj) {
    traj.validate();
    std::string out = "t";
    for (int i = 1; i <= traj.n; ++i) out += ",x" + std::to_string(i);
    for (int i = 1; i <= traj.m; ++i) out += ",u" + std::to_string(i);
    out += '\n';
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
        out += std::to_string(k);
        for (int i = 0; i < traj.n; ++i) out += "," + fmt_double(traj.states[k](i));
        for (int i = 0; i < traj.m; ++i) {
            out += ",";
            if (k < traj.inputs.size()) out += fmt_double(traj.inputs[k](i));
        }
        out += '\n';
    }
    return out;
}

Trajectory parse_trajectory_json(const std::string& text) {
    if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
        throw InputError("trajectory JSON is empty");
    }
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(std::string("trajectory JSON parse error: ") + e.what());
    }
    try {
        Trajectory traj;
        traj.n = doc.at("n").get<int>();
        traj.m = doc.at("m").get<int>();
        auto read_vectors = [](const nlohmann::json& arr, std::vector<Eigen::VectorXd>& dst) {
            for (const auto& row : arr) {
                const auto v = row.get<std::vector<double>>();
                dst.emplace_back(Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
            }
        };
        read_vectors(doc.at("states"), traj.states);
        read_vectors(doc.at("inputs"), traj.inputs);
        traj.validate();
        return traj;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("trajectory JSON has wrong structure: ") + e.what());
    }
}

std::string format_trajectory_json(const Trajectory& traj) {
    traj.validate();
    auto to_rows = [](const std::vector<Eigen::VectorXd>& vs) {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& v : vs) rows.push_back(std::vector<double>(v.data(), v.data() + v.size()));
        return rows;
    };
    nlohmann::json doc;
    doc["n"] = traj.n;
    doc["m"] = traj.m;
    doc["states"] = to_rows(traj.states);
    doc["inputs"] = to_rows(traj.inputs);
    // nlohmann emits the shortest round-trip representation (17 significant digits at most).
    return doc.dump(2) + "\n";
}

Trajectory load_trajectory(const std::filesystem::path& path, TrajectoryFormat format) {
    const std::string text = read_file(path);
    try {
        return format == TrajectoryFormat::json ? parse_trajectory_json(text)
                                                : parse_trajectory_csv(text);
    } catch (const InputError& e) {
        throw InputError(path.string() + ": " + e.what());
    }
}

Trajectory load_trajectory(const std::filesystem::path& path) {
    return load_trajectory(path, format_from_path(path));
}

void save_trajectory(const Trajectory& traj, const std::filesystem::path& path,
                     TrajectoryFormat format) {
    const std::string text =
        format == TrajectoryFormat::json ? format_trajectory_json(traj) : format_trajectory_csv(traj);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path.string());
    out << text;
}

void save_trajectory(const Trajectory& traj, const std::filesystem::path& path) {
    save_trajectory(traj, path, format_from_path(path));
}

}  // namespace transid
