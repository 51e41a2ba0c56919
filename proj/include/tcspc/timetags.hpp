#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace tcspc {

struct TimeTag {
    std::uint64_t time_ps = 0;
    std::uint8_t channel = 1;  // HBT channel, 1 or 2

    friend bool operator==(const TimeTag&, const TimeTag&) = default;
};

// Ordered detection events plus acquisition metadata; the exchange object
// between the simulator and every analysis stage. Tags are sorted by time,
// ties broken by channel.
struct TimeTagStream {
    std::vector<TimeTag> tags;
    std::uint64_t rep_period_ps = 0;  // 0 for non-pulsed sources
    std::uint64_t duration_ps = 0;
    std::string source;

    std::vector<std::uint64_t> channel_times(int channel) const;
    bool is_sorted() const;
    double duration_s() const { return static_cast<double>(duration_ps) * 1e-12; }
    // total count rate over the acquisition, counts/s
    double mean_rate_cps() const {
        return duration_ps ? static_cast<double>(tags.size()) / duration_s() : 0.0;
    }
};

enum class TagFormatErrorKind {
    bad_magic,      // unrecognized leading bytes / wrong magic
    bad_header,     // header fields fail validation
    truncated,      // payload shorter than record_count promises
    non_monotonic,  // times not sorted
    bad_record,     // channel outside the declared channel count, CSV syntax
    io,
};

class TagFormatError : public std::runtime_error {
  public:
    TagFormatError(TagFormatErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    TagFormatErrorKind kind() const { return kind_; }

  private:
    TagFormatErrorKind kind_;
};

// Binary layout (little-endian): magic "TTAG0001", u16 version, u64
// rep_period_ps, u8 channel_count, u64 duration_ps, u64 record_count,
// then record_count records of 9 bytes each (u8 channel, u64 time_ps).
inline constexpr char kTagMagic[8] = {'T', 'T', 'A', 'G', '0', '0', '0', '1'};
inline constexpr std::uint16_t kTagFormatVersion = 1;
inline constexpr std::size_t kTagHeaderBytes = 35;

// Returns the number of bytes written.
std::uint64_t write_tags(const TimeTagStream& stream, std::ostream& out);
std::uint64_t write_tags_file(const TimeTagStream& stream, const std::filesystem::path& path);

// CSV text form: header line "channel,time_ps" followed by one row per tag.
void write_tags_csv(const TimeTagStream& stream, std::ostream& out);
void write_tags_csv_file(const TimeTagStream& stream, const std::filesystem::path& path);

// Reads either format, autodetected from the leading bytes. The binary
// reader works in fixed-size chunks so memory overhead beyond the returned
// vector does not grow with record_count.
TimeTagStream read_tags(std::istream& in);
TimeTagStream read_tags_file(const std::filesystem::path& path);

// Tags with time in [lo_ps, hi_ps); metadata preserved.
TimeTagStream slice(const TimeTagStream& stream, std::uint64_t lo_ps, std::uint64_t hi_ps);

// Merge two sorted streams into one sorted stream.
TimeTagStream merge(const TimeTagStream& a, const TimeTagStream& b);

}  // namespace tcspc
