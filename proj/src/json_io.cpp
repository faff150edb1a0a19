#include "telecert/json_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace telecert {

namespace {
using nlohmann::json;

json parse(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw JsonError("malformed JSON");
    return j;
}
}  // namespace

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

std::string matrix_to_json(const ComplexMatrix& m) {
    std::ostringstream os;
    os << "{\"rows\": " << m.rows() << ", \"cols\": " << m.cols() << ", \"data\": [";
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) {
            if (i + j > 0) os << ", ";
            os << '[' << format_number(m(i, j).real()) << ", " << format_number(m(i, j).imag())
               << ']';
        }
    os << "]}";
    return os.str();
}

ComplexMatrix matrix_from_json(const std::string& text) {
    const json j = parse(text);
    if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data"))
        throw JsonError("matrix JSON needs rows, cols and data");
    const int rows = j["rows"].get<int>();
    const int cols = j["cols"].get<int>();
    if (rows <= 0 || cols <= 0 || rows > 64 || cols > 64)
        throw JsonError("unreasonable matrix dimensions");
    const auto& data = j["data"];
    if (!data.is_array() || static_cast<int>(data.size()) != rows * cols)
        throw JsonError("matrix data length does not match dimensions");
    ComplexMatrix m(rows, cols);
    int idx = 0;
    for (const auto& e : data) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
            throw JsonError("matrix entries must be [re, im] pairs");
        m(idx / cols, idx % cols) = Complex(e[0].get<double>(), e[1].get<double>());
        ++idx;
    }
    return m;
}

ComplexMatrix load_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw JsonError("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return matrix_from_json(os.str());
}

void save_matrix(const std::string& path, const ComplexMatrix& m) {
    std::ofstream out(path);
    if (!out) throw JsonError("cannot write " + path);
    out << matrix_to_json(m) << '\n';
}

std::string report_to_json(const CertificationReport& r) {
    std::ostringstream os;
    os << "{\"f_expt\": " << format_number(r.f_expt)
       << ", \"f_avg_state\": " << format_number(r.f_avg_state)
       << ", \"alpha\": " << format_number(r.alpha) << ", \"beta\": " << format_number(r.beta)
       << ", \"gqt\": " << (r.gqt ? "true" : "false") << ", \"flags\": [";
    for (size_t i = 0; i < r.flags.size(); ++i) {
        if (i) os << ", ";
        os << '"' << r.flags[i] << '"';
    }
    os << "], \"thresholds\": {\"f_ct\": " << format_number(r.thresholds.f_ct)
       << ", \"f_avg\": " << format_number(r.thresholds.f_avg)
       << ", \"guard\": " << format_number(r.thresholds.guard) << "}}";
    return os.str();
}

std::string bound_to_json(const Thresholds& t) {
    std::ostringstream os;
    os << "{\"f_ct\": " << format_number(t.f_ct) << ", \"f_avg\": " << format_number(t.f_avg)
       << "}";
    return os.str();
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    os << "p_noise,f_expt,f_avg_state,alpha,beta,negativity,steerable_weight,gqt\n";
    for (const auto& r : rows) {
        os << format_number(r.p_noise) << ',' << format_number(r.f_expt) << ','
           << format_number(r.f_avg_state) << ',' << format_number(r.alpha) << ','
           << format_number(r.beta) << ',' << format_number(r.negativity) << ','
           << format_number(r.steerable_weight) << ',' << (r.gqt ? "true" : "false") << '\n';
    }
    return os.str();
}

std::vector<ExperimentEntry> experiments_from_json(const std::string& text) {
    json j = parse(text);
    if (j.is_object() && j.contains("experiments")) j = j["experiments"];
    if (!j.is_array()) throw JsonError("experiments JSON must be an array");
    std::vector<ExperimentEntry> out;
    for (const auto& e : j) {
        if (!e.is_object() || !e.contains("kind") || !e.contains("value"))
            throw JsonError("experiment entry needs kind and value");
        ExperimentEntry entry;
        entry.name = e.value("name", std::string("experiment " + std::to_string(out.size() + 1)));
        const std::string kind = e["kind"].get<std::string>();
        if (kind == "process")
            entry.kind = FidelityKind::process;
        else if (kind == "avg_state")
            entry.kind = FidelityKind::avg_state;
        else
            throw JsonError("unknown fidelity kind tag: " + kind);
        if (!e["value"].is_number()) throw JsonError("experiment value must be a number");
        entry.value = e["value"].get<double>();
        out.push_back(std::move(entry));
    }
    return out;
}

std::string sdp_problem_to_json(const SdpProblem& p) {
    std::ostringstream os;
    os << "{\"blocks\": [";
    for (size_t b = 0; b < p.blocks.size(); ++b) {
        if (b) os << ", ";
        os << "{\"name\": \"" << p.blocks[b].name << "\", \"dim\": " << p.blocks[b].dim << "}";
    }
    os << "], \"objective\": [";
    for (size_t b = 0; b < p.objective.size(); ++b) {
        if (b) os << ", ";
        os << (p.objective[b].empty() ? "null" : matrix_to_json(p.objective[b]));
    }
    os << "], \"constraints\": [";
    for (size_t i = 0; i < p.constraints.size(); ++i) {
        if (i) os << ", ";
        os << "{\"rhs\": " << format_number(p.constraints[i].rhs) << ", \"coeff\": [";
        for (size_t b = 0; b < p.constraints[i].coeff.size(); ++b) {
            if (b) os << ", ";
            const auto& c = p.constraints[i].coeff[b];
            os << (c.empty() ? "null" : matrix_to_json(c));
        }
        os << "]}";
    }
    os << "]}";
    return os.str();
}

}  // namespace telecert
