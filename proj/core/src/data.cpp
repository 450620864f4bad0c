#include "aoa/data.hpp"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace aoa {

const char* polarity_name(Polarity p) {
    switch (p) {
        case Polarity::Positive: return "positive";
        case Polarity::Neutral: return "neutral";
        case Polarity::Negative: return "negative";
    }
    return "?";
}

std::optional<Polarity> polarity_from_name(std::string_view s) {
    if (s == "positive") return Polarity::Positive;
    if (s == "neutral") return Polarity::Neutral;
    if (s == "negative") return Polarity::Negative;
    return std::nullopt;
}

namespace {

// Decodes one UTF-8 scalar starting at byte i; advances i.
char32_t decode_utf8(std::string_view s, std::size_t& i) {
    const unsigned char b0 = static_cast<unsigned char>(s[i]);
    std::size_t len;
    char32_t cp;
    if (b0 < 0x80) {
        len = 1;
        cp = b0;
    } else if ((b0 & 0xE0) == 0xC0) {
        len = 2;
        cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
        len = 3;
        cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
        len = 4;
        cp = b0 & 0x07;
    } else {
        throw std::invalid_argument("invalid UTF-8 byte at offset " + std::to_string(i));
    }
    if (i + len > s.size()) {
        throw std::invalid_argument("truncated UTF-8 sequence at offset " + std::to_string(i));
    }
    for (std::size_t k = 1; k < len; ++k) {
        const unsigned char b = static_cast<unsigned char>(s[i + k]);
        if ((b & 0xC0) != 0x80) {
            throw std::invalid_argument("invalid UTF-8 continuation at offset " +
                                        std::to_string(i + k));
        }
        cp = (cp << 6) | (b & 0x3F);
    }
    i += len;
    return cp;
}

void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

bool is_ws(char32_t cp) {
    return cp == U' ' || cp == U'\t' || cp == U'\n' || cp == U'\r' || cp == U'\v' ||
           cp == U'\f';
}

// Word characters: ASCII alphanumerics and every non-ASCII scalar.
// Everything else printable is punctuation.
bool is_word(char32_t cp) {
    if (cp >= 0x80) return true;
    return std::isalnum(static_cast<unsigned char>(cp)) != 0;
}

char32_t to_lower(char32_t cp) {
    if (cp >= U'A' && cp <= U'Z') return cp + 32;
    return cp;
}

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
    std::vector<Token> out;
    std::size_t byte = 0;
    std::size_t pos = 0;  // scalar position
    Token cur;
    bool in_token = false;
    bool cur_word = false;
    auto flush = [&] {
        if (in_token) {
            out.push_back(std::move(cur));
            cur = Token{};
            in_token = false;
        }
    };
    while (byte < text.size()) {
        const char32_t cp = decode_utf8(text, byte);
        if (is_ws(cp)) {
            flush();
        } else {
            const bool word = is_word(cp);
            if (in_token && word != cur_word) flush();
            if (!in_token) {
                in_token = true;
                cur_word = word;
                cur.begin = pos;
            }
            append_utf8(cur.text, to_lower(cp));
            cur.end = pos + 1;
        }
        ++pos;
    }
    flush();
    return out;
}

std::string utf8_substr(std::string_view text, std::size_t begin, std::size_t end) {
    std::string out;
    std::size_t byte = 0;
    std::size_t pos = 0;
    while (byte < text.size() && pos < end) {
        const std::size_t start_byte = byte;
        decode_utf8(text, byte);
        if (pos >= begin) out.append(text.substr(start_byte, byte - start_byte));
        ++pos;
    }
    return out;
}

std::size_t utf8_length(std::string_view text) {
    std::size_t byte = 0, pos = 0;
    while (byte < text.size()) {
        decode_utf8(text, byte);
        ++pos;
    }
    return pos;
}

std::optional<std::pair<std::size_t, std::size_t>> align_aspect_span(
    const std::vector<Token>& tokens, std::size_t char_from, std::size_t char_to) {
    std::size_t lo = tokens.size();
    std::size_t hi = 0;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (tokens[i].begin < char_to && tokens[i].end > char_from) {
            lo = std::min(lo, i);
            hi = std::max(hi, i + 1);
        }
    }
    if (lo >= hi) return std::nullopt;
    return std::make_pair(lo, hi);
}

namespace {

// Builds a Sample from a raw sentence and an aspect character range;
// returns a diagnostic string on rejection.
std::optional<std::string> make_sample(const std::string& text, std::size_t from,
                                       std::size_t to, Polarity pol, Sample& out) {
    const std::vector<Token> toks = tokenize(text);
    if (toks.empty()) return "sentence has no tokens: \"" + text + "\"";
    const auto span = align_aspect_span(toks, from, to);
    if (!span) {
        return "aspect range [" + std::to_string(from) + "," + std::to_string(to) +
               ") overlaps no token in \"" + text + "\"";
    }
    out.tokens.clear();
    out.tokens.reserve(toks.size());
    for (const Token& t : toks) out.tokens.push_back(t.text);
    out.aspect_begin = span->first;
    out.aspect_end = span->second;
    out.polarity = pol;
    out.raw_text = text;
    return std::nullopt;
}

}  // namespace

LoadResult parse_semeval_xml(const std::string& path) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        pt::read_xml(path, tree);
    } catch (const pt::xml_parser_error& e) {
        throw std::runtime_error("malformed XML in " + path + " (line " +
                                 std::to_string(e.line()) + "): " + e.message());
    }
    LoadResult res;
    const auto sentences = tree.get_child_optional("sentences");
    if (!sentences) {
        throw std::runtime_error(path + ": missing <sentences> root element");
    }
    for (const auto& [tag, node] : *sentences) {
        if (tag != "sentence") continue;
        const std::string text = node.get<std::string>("text", "");
        const auto terms = node.get_child_optional("aspectTerms");
        if (!terms) continue;
        for (const auto& [ttag, at] : *terms) {
            if (ttag != "aspectTerm") continue;
            const std::string pol_str = at.get<std::string>("<xmlattr>.polarity");
            if (pol_str == "conflict") {
                ++res.conflict_dropped;
                continue;
            }
            const auto pol = polarity_from_name(pol_str);
            if (!pol) {
                throw std::runtime_error(path + ": unknown polarity \"" + pol_str + "\"");
            }
            const auto from = at.get<std::size_t>("<xmlattr>.from");
            const auto to = at.get<std::size_t>("<xmlattr>.to");
            Sample s;
            if (auto err = make_sample(text, from, to, *pol, s)) {
                res.warnings.push_back(path + ": " + *err);
            } else {
                res.samples.push_back(std::move(s));
            }
        }
    }
    return res;
}

LoadResult load_tsv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    LoadResult res;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cols;
        std::size_t start = 0;
        while (true) {
            const std::size_t tab = line.find('\t', start);
            cols.push_back(line.substr(start, tab - start));
            if (tab == std::string::npos) break;
            start = tab + 1;
        }
        if (cols.size() != 5) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected 5 columns, got " +
                                     std::to_string(cols.size()));
        }
        std::size_t from, to;
        try {
            from = std::stoull(cols[2]);
            to = std::stoull(cols[3]);
        } catch (const std::exception&) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": bad offsets \"" +
                                     cols[2] + "\", \"" + cols[3] + "\"");
        }
        if (from >= to || to > utf8_length(cols[0])) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": offsets [" + cols[2] +
                                     "," + cols[3] + ") out of range");
        }
        const auto pol = polarity_from_name(cols[4]);
        if (!pol) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": unknown polarity \"" +
                                     cols[4] + "\"");
        }
        Sample s;
        if (auto err = make_sample(cols[0], from, to, *pol, s)) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + *err);
        }
        res.samples.push_back(std::move(s));
    }
    return res;
}

void save_tsv(const std::string& path, const std::vector<Sample>& samples) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (const Sample& s : samples) {
        const std::vector<Token> toks = tokenize(s.raw_text);
        const std::size_t from = toks.at(s.aspect_begin).begin;
        const std::size_t to = toks.at(s.aspect_end - 1).end;
        out << s.raw_text << '\t' << utf8_substr(s.raw_text, from, to) << '\t' << from << '\t'
            << to << '\t' << polarity_name(s.polarity) << '\n';
    }
}

DatasetStats dataset_stats(const std::vector<Sample>& samples) {
    DatasetStats st;
    for (const Sample& s : samples) ++st.counts[static_cast<int>(s.polarity)];
    return st;
}

std::string format_stats(const std::string& name, const DatasetStats& stats) {
    std::ostringstream os;
    const std::size_t width = std::max<std::size_t>(name.size() + 2, 19);
    os << "Dataset";
    for (std::size_t i = 7; i < width; ++i) os << ' ';
    os << "Positive  Neutral  Negative\n";
    os << name;
    for (std::size_t i = name.size(); i < width; ++i) os << ' ';
    os << stats.counts[0] << "      " << stats.counts[1] << "     " << stats.counts[2] << "\n";
    return os.str();
}

}  // namespace aoa
