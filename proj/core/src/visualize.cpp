#include "aoa/visualize.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace aoa {

const char* polarity_pm(Polarity p) {
    switch (p) {
        case Polarity::Positive: return "+1";
        case Polarity::Neutral: return "0";
        case Polarity::Negative: return "-1";
    }
    return "?";
}

namespace {

std::string html_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (const char ch : s) {
        switch (ch) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out.push_back(ch);
        }
    }
    return out;
}

Real max_gamma(const HeatmapRow& row) {
    Real mx = 0;
    for (const Real g : row.gamma) mx = std::max(mx, g);
    return mx > 0 ? mx : Real(1);
}

}  // namespace

std::string render_heatmap_html(const std::vector<HeatmapRow>& rows) {
    std::ostringstream os;
    os << "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n"
       << "<title>Attention heatmap</title>\n"
       << "<style>\n"
       << "body { font-family: sans-serif; margin: 2em; }\n"
       << "table { border-collapse: collapse; }\n"
       << "td { padding: 0.4em 0.8em; border-bottom: 1px solid #ddd; }\n"
       << ".tok { padding: 0.1em 0.15em; border-radius: 2px; }\n"
       << ".aspect { text-decoration: underline; font-weight: bold; }\n"
       << "</style>\n</head>\n<body>\n"
       << "<table>\n<tr><th>Sentence</th><th>Ans./Pred.</th></tr>\n";
    for (const HeatmapRow& row : rows) {
        const Real mx = max_gamma(row);
        os << "<tr><td>";
        for (std::size_t i = 0; i < row.tokens.size(); ++i) {
            const Real opacity = row.gamma[i] / mx;
            os << "<span class=\"tok";
            if (i >= row.aspect_begin && i < row.aspect_end) os << " aspect";
            os << "\" style=\"background: rgba(220, 40, 40, "
               << std::round(opacity * 1000) / 1000 << ")\" title=\"" << row.gamma[i]
               << "\">" << html_escape(row.tokens[i]) << "</span> ";
        }
        os << "</td><td>" << polarity_pm(row.gold) << "/" << polarity_pm(row.predicted)
           << "</td></tr>\n";
    }
    os << "</table>\n</body>\n</html>\n";
    return os.str();
}

std::string render_heatmap_ansi(const std::vector<HeatmapRow>& rows) {
    std::ostringstream os;
    for (const HeatmapRow& row : rows) {
        const Real mx = max_gamma(row);
        for (std::size_t i = 0; i < row.tokens.size(); ++i) {
            // Grayscale ramp 232..255 mapped onto red-ish background depth.
            const int level = static_cast<int>(std::lround(row.gamma[i] / mx * 5));
            const int color = 16 + 36 * std::clamp(level, 0, 5);  // 16, 52, ... 196
            os << "\x1b[48;5;" << color << "m";
            if (i >= row.aspect_begin && i < row.aspect_end) os << "\x1b[4m";
            os << row.tokens[i] << "\x1b[0m ";
        }
        os << " " << polarity_pm(row.gold) << "/" << polarity_pm(row.predicted) << "\n";
    }
    return os.str();
}

}  // namespace aoa
