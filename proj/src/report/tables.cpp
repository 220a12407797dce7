#include "bulbar/report/tables.hpp"

#include <map>
#include <set>

#include <fmt/format.h>

#include "bulbar/core/fileio.hpp"
#include "bulbar/error.hpp"

namespace bulbar::report {

namespace {

template <std::size_t N>
std::string features_csv(const std::vector<RepetitionRow<FeatureRow<N>>>& rows,
                         const std::array<std::string_view, N>& names) {
    std::string out = "subject,rep";
    for (auto n : names) out += fmt::format(",{}", n);
    out += "\n";
    for (const auto& r : rows) {
        out += fmt::format("{},{}", csv_field(r.subject_id), r.repetition);
        for (const auto& v : r.features.values) out += "," + format_value(v);
        out += "\n";
    }
    return out;
}

std::string join(const std::vector<std::string>& items, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += sep;
        out += items[i];
    }
    return out;
}

}  // namespace

std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string format_value(std::optional<double> v) {
    if (!v) return "";
    const double x = *v == 0.0 ? 0.0 : *v;  // no "-0.000000"
    std::string s = fmt::format("{:.6f}", x);
    return s == "-0.000000" ? "0.000000" : s;
}

std::string audio_features_csv(const std::vector<AudioRepetitionRow>& rows) {
    return features_csv(rows, kAudioFeatureNames);
}

std::string video_features_csv(const std::vector<VideoRepetitionRow>& rows) {
    return features_csv(rows, kVideoFeatureNames);
}

std::string exclusions_log(const std::vector<Exclusion>& exclusions) {
    std::string out = "subject,rep,modality,reason\n";
    for (const auto& e : exclusions) {
        out += fmt::format("{},{},{},{}\n", csv_field(e.subject_id), e.repetition, to_string(e.modality),
                           csv_field(e.reason));
    }
    return out;
}

std::string report_csv(const eval::EvaluationReport& report) {
    std::string out = "subject,group,n_reps,rmse";
    for (const auto& [name, value] : models::spec_fields(models::enumerate_grid(report.family).front())) {
        out += "," + name;
    }
    out += "\n";
    for (std::size_t i = 0; i < report.subjects.size(); ++i) {
        const auto& s = report.subjects[i];
        out += fmt::format("{},{},{},{}", csv_field(s.subject_id), to_string(s.group), s.n_reps, format_value(s.rmse));
        for (const auto& [name, value] : models::spec_fields(report.folds[i].chosen_spec)) out += "," + value;
        out += "\n";
    }
    return out;
}

std::string summary_csv(const std::vector<eval::EvaluationReport>& reports) {
    std::string out = "modality,model,n_subjects,mrmse,mrmse_als,mrmse_hc,cv_als,cv_hc\n";
    for (const auto& r : reports) {
        out += fmt::format("{},{},{},{},{},{},{},{}\n", to_string(r.modality), models::to_string(r.family),
                           r.subjects.size(), format_value(r.mrmse), format_value(r.mrmse_als),
                           format_value(r.mrmse_hc), format_value(r.cv_als), format_value(r.cv_hc));
    }
    return out;
}

std::string predictions_csv(const std::vector<eval::EvaluationReport>& reports) {
    std::string out = "modality,model,subject,group,rep,y_true,y_pred\n";
    for (const auto& r : reports) {
        for (const auto& f : r.folds) {
            for (const auto& p : f.predictions) {
                out += fmt::format("{},{},{},{},{},{},{}\n", to_string(r.modality), models::to_string(r.family),
                                   csv_field(f.subject_id), to_string(f.group), p.repetition,
                                   format_value(p.y_true), format_value(p.y_pred));
            }
        }
    }
    return out;
}

std::vector<PredictionRecord> parse_predictions_csv(const std::string& text, const std::string& name) {
    const auto lines = split_lines(text);
    if (lines.empty() || trim(lines[0]) != "modality,model,subject,group,rep,y_true,y_pred") {
        throw ParseError(fmt::format("{}: expected header 'modality,model,subject,group,rep,y_true,y_pred'", name));
    }
    std::vector<PredictionRecord> out;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (trim(lines[i]).empty()) continue;
        const auto f = split_fields(lines[i]);
        const std::string where = fmt::format("{}:{}", name, i + 1);
        if (f.size() != 7) throw ParseError(fmt::format("{}: expected 7 fields, got {}", where, f.size()));
        PredictionRecord r;
        r.modality = f[0];
        r.model = f[1];
        r.subject_id = f[2];
        try {
            r.group = parse_group(f[3]);
        } catch (const ValidationError& e) {
            throw ParseError(fmt::format("{}: {}", where, e.what()));
        }
        r.repetition = static_cast<int>(parse_int(f[4], where));
        r.y_true = parse_double(f[5], where);
        r.y_pred = parse_double(f[6], where);
        out.push_back(std::move(r));
    }
    return out;
}

FriedmanInput friedman_input(const std::vector<PredictionRecord>& predictions) {
    // condition -> subject -> (y_true, y_pred) pairs
    std::vector<std::string> order;
    std::map<std::string, std::map<std::string, std::vector<std::pair<double, double>>>> cells;
    for (const auto& p : predictions) {
        const std::string cond = p.modality + "/" + p.model;
        if (!cells.count(cond)) order.push_back(cond);
        cells[cond][p.subject_id].emplace_back(p.y_true, p.y_pred);
    }
    if (order.size() < 2) {
        throw ValidationError(fmt::format("Friedman test needs at least 2 conditions, got {}", order.size()));
    }
    std::set<std::string> common;
    for (const auto& [subject, pairs] : cells[order.front()]) common.insert(subject);
    for (const auto& cond : order) {
        std::set<std::string> keep;
        for (const auto& s : common) {
            if (cells[cond].count(s)) keep.insert(s);
        }
        common = std::move(keep);
    }
    if (common.empty()) throw ValidationError("no subject is present in every condition");

    FriedmanInput in;
    in.conditions = order;
    for (const auto& s : common) {
        in.subjects.push_back(s);
        std::vector<double> row;
        for (const auto& cond : order) row.push_back(eval::subject_rmse(cells[cond][s]));
        in.blocks.push_back(std::move(row));
    }
    return in;
}

std::string friedman_csv(const eval::FriedmanResult& result, const FriedmanInput& input) {
    return fmt::format("chi2,df,p,n_blocks,conditions,subjects\n{},{},{},{},{},{}\n", format_value(result.chi2),
                       result.df, format_value(result.p), input.blocks.size(),
                       csv_field(join(input.conditions, ";")), csv_field(join(input.subjects, ";")));
}

}  // namespace bulbar::report
