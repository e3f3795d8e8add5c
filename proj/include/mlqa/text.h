#ifndef MLQA_TEXT_H_
#define MLQA_TEXT_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace mlqa {

using Tokens = std::vector<std::string>;

enum class Language { en, ar, ch };

inline constexpr std::array<Language, 3> kLanguages = {Language::en,
                                                       Language::ar,
                                                       Language::ch};

std::string_view to_string(Language language);
// Throws Error on anything other than "en", "ar" or "ch".
Language parse_language(std::string_view text);

Tokens split_whitespace(std::string_view text);
// Splits on '\t' and keeps empty fields.
std::vector<std::string> split_tabs(std::string_view line);
std::string join(const Tokens& tokens, std::string_view separator = " ");

// Shortest text that reads back to the same double.
std::string format_double(double value);
// Fixed-point rendering for human-facing reports.
std::string format_fixed(double value, int precision);

// Strict numeric parsing; the whole field must be consumed.
double parse_double(std::string_view text);
long long parse_integer(std::string_view text);

// Calls visit(line_number, line) for every line; blank or whitespace-only lines
// and lines starting with '#' are skipped. Trailing '\r' is stripped.
void for_each_record(
    std::istream& in,
    const std::function<void(std::size_t, const std::string&)>& visit);

std::ifstream open_input(const std::filesystem::path& path);
std::ofstream open_output(const std::filesystem::path& path);

}  // namespace mlqa

#endif  // MLQA_TEXT_H_
