#pragma once

#include <string>
#include <vector>

#include "aoa/data.hpp"
#include "aoa/matrix.hpp"

namespace aoa {

struct HeatmapRow {
    std::vector<std::string> tokens;
    std::vector<Real> gamma;  // one weight per token, a distribution
    std::size_t aspect_begin{0};
    std::size_t aspect_end{0};
    Polarity gold{Polarity::Positive};
    Polarity predicted{Polarity::Positive};
};

// Table-3 style label rendering: positive -> "+1", neutral -> "0",
// negative -> "-1".
const char* polarity_pm(Polarity p);

// Self-contained HTML heatmap, one row per sample. Shading is a linear
// map from gamma_i / max(gamma) to background opacity; the aspect term is
// underlined and labels appear as "Ans./Pred.".
std::string render_heatmap_html(const std::vector<HeatmapRow>& rows);

// 256-color terminal rendering of the same rows.
std::string render_heatmap_ansi(const std::vector<HeatmapRow>& rows);

}  // namespace aoa
