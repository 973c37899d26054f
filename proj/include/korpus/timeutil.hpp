#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace korpus {

using Timestamp = std::chrono::sys_seconds;
using Date = std::chrono::year_month_day;

/// "2021-10-01T12:00:00Z"
std::string format_timestamp(Timestamp t);
Timestamp parse_timestamp(std::string_view text);

/// "2021-10-01"
std::string format_date(Date d);
Date parse_date(std::string_view text);

Timestamp now_seconds();
Date today();

}  // namespace korpus
