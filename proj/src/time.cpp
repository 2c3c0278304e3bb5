#include "soue/time.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>
#include <stdexcept>

namespace soue {
namespace {

int read_digits(std::string_view text, std::size_t pos, std::size_t count) {
  if (pos + count > text.size()) {
    throw std::invalid_argument("truncated timestamp '" + std::string(text) + "'");
  }
  int value = 0;
  for (std::size_t i = pos; i < pos + count; ++i) {
    const char c = text[i];
    if (c < '0' || c > '9') {
      throw std::invalid_argument("bad digit in timestamp '" + std::string(text) + "'");
    }
    value = value * 10 + (c - '0');
  }
  return value;
}

void expect(std::string_view text, std::size_t pos, char c) {
  if (pos >= text.size() || text[pos] != c) {
    throw std::invalid_argument("malformed timestamp '" + std::string(text) + "'");
  }
}

}  // namespace

EpochSeconds parse_iso8601(std::string_view text) {
  using namespace std::chrono;
  const int y = read_digits(text, 0, 4);
  expect(text, 4, '-');
  const int mo = read_digits(text, 5, 2);
  expect(text, 7, '-');
  const int d = read_digits(text, 8, 2);
  if (text.size() <= 10 || (text[10] != 'T' && text[10] != ' ')) {
    throw std::invalid_argument("timestamp lacks a time part '" + std::string(text) + "'");
  }
  const int h = read_digits(text, 11, 2);
  expect(text, 13, ':');
  const int mi = read_digits(text, 14, 2);
  expect(text, 16, ':');
  const int s = read_digits(text, 17, 2);
  std::size_t pos = 19;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
  }
  if (pos >= text.size()) {
    throw std::invalid_argument("timestamp lacks a timezone '" + std::string(text) + "'");
  }

  int offset_seconds = 0;
  const char zone = text[pos];
  if (zone == 'Z' || zone == 'z') {
    ++pos;
  } else if (zone == '+' || zone == '-') {
    const int oh = read_digits(text, pos + 1, 2);
    std::size_t mpos = pos + 3;
    if (mpos < text.size() && text[mpos] == ':') ++mpos;
    const int om = read_digits(text, mpos, 2);
    if (oh > 23 || om > 59) {
      throw std::invalid_argument("bad timezone offset '" + std::string(text) + "'");
    }
    offset_seconds = (oh * 3600 + om * 60) * (zone == '+' ? 1 : -1);
    pos = mpos + 2;
  } else {
    throw std::invalid_argument("bad timezone designator '" + std::string(text) + "'");
  }
  if (pos != text.size()) {
    throw std::invalid_argument("trailing characters in timestamp '" + std::string(text) + "'");
  }

  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)},
                           day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || s > 60) {
    throw std::invalid_argument("out-of-range timestamp '" + std::string(text) + "'");
  }
  const auto days_since_epoch = sys_days{ymd}.time_since_epoch().count();
  return static_cast<EpochSeconds>(days_since_epoch) * 86400 + h * 3600 + mi * 60 + s -
         offset_seconds;
}

namespace {

struct Civil {
  int year;
  unsigned month, day, hour, minute, second;
};

Civil to_civil(EpochSeconds t) {
  using namespace std::chrono;
  EpochSeconds days = t / 86400;
  EpochSeconds rem = t % 86400;
  if (rem < 0) {
    rem += 86400;
    --days;
  }
  const year_month_day ymd{sys_days{std::chrono::days{days}}};
  return {static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
          static_cast<unsigned>(ymd.day()), static_cast<unsigned>(rem / 3600),
          static_cast<unsigned>((rem % 3600) / 60), static_cast<unsigned>(rem % 60)};
}

}  // namespace

std::string format_iso8601(EpochSeconds t) {
  const Civil c = to_civil(t);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02u:%02u:%02uZ", c.year, c.month, c.day,
                c.hour, c.minute, c.second);
  return buf;
}

std::string format_compact(EpochSeconds t) {
  const Civil c = to_civil(t);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d%02u%02uT%02u%02u%02uZ", c.year, c.month, c.day, c.hour,
                c.minute, c.second);
  return buf;
}

}  // namespace soue
