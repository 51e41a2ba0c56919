#include "tcspc/timetags.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstring>
#include <fstream>
#include <ostream>

namespace tcspc {

namespace {

constexpr std::size_t kRecordBytes = 9;
constexpr std::size_t kChunkRecords = 1 << 16;

void put_u16(unsigned char* p, std::uint16_t v) {
    p[0] = static_cast<unsigned char>(v & 0xff);
    p[1] = static_cast<unsigned char>(v >> 8);
}

void put_u64(unsigned char* p, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) p[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
}

std::uint16_t get_u16(const unsigned char* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint64_t get_u64(const unsigned char* p) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    return v;
}

}  // namespace

std::vector<std::uint64_t> TimeTagStream::channel_times(int channel) const {
    std::vector<std::uint64_t> out;
    for (const auto& t : tags)
        if (t.channel == channel) out.push_back(t.time_ps);
    return out;
}

bool TimeTagStream::is_sorted() const {
    return std::is_sorted(tags.begin(), tags.end(), [](const TimeTag& a, const TimeTag& b) {
        return a.time_ps != b.time_ps ? a.time_ps < b.time_ps : a.channel < b.channel;
    });
}

std::uint64_t write_tags(const TimeTagStream& stream, std::ostream& out) {
    if (!stream.is_sorted())
        throw TagFormatError(TagFormatErrorKind::non_monotonic,
                             "write_tags: stream violates time ordering");

    unsigned char header[kTagHeaderBytes];
    std::memcpy(header, kTagMagic, 8);
    put_u16(header + 8, kTagFormatVersion);
    put_u64(header + 10, stream.rep_period_ps);
    header[18] = 2;  // channel_count
    put_u64(header + 19, stream.duration_ps);
    put_u64(header + 27, static_cast<std::uint64_t>(stream.tags.size()));
    out.write(reinterpret_cast<const char*>(header), kTagHeaderBytes);

    std::vector<unsigned char> buf(kChunkRecords * kRecordBytes);
    std::size_t pending = 0;
    for (const auto& tag : stream.tags) {
        unsigned char* rec = buf.data() + pending * kRecordBytes;
        rec[0] = tag.channel;
        put_u64(rec + 1, tag.time_ps);
        if (++pending == kChunkRecords) {
            out.write(reinterpret_cast<const char*>(buf.data()),
                      static_cast<std::streamsize>(pending * kRecordBytes));
            pending = 0;
        }
    }
    if (pending)
        out.write(reinterpret_cast<const char*>(buf.data()),
                  static_cast<std::streamsize>(pending * kRecordBytes));
    if (!out) throw TagFormatError(TagFormatErrorKind::io, "write_tags: write failed");
    return kTagHeaderBytes + stream.tags.size() * kRecordBytes;
}

std::uint64_t write_tags_file(const TimeTagStream& stream, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw TagFormatError(TagFormatErrorKind::io, "cannot open for writing: " + path.string());
    return write_tags(stream, out);
}

void write_tags_csv(const TimeTagStream& stream, std::ostream& out) {
    out << "channel,time_ps\n";
    for (const auto& tag : stream.tags)
        out << static_cast<int>(tag.channel) << ',' << tag.time_ps << '\n';
    if (!out) throw TagFormatError(TagFormatErrorKind::io, "write_tags_csv: write failed");
}

void write_tags_csv_file(const TimeTagStream& stream, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw TagFormatError(TagFormatErrorKind::io, "cannot open for writing: " + path.string());
    write_tags_csv(stream, out);
}

namespace {

TimeTagStream read_binary(std::istream& in) {
    unsigned char header[kTagHeaderBytes];
    in.read(reinterpret_cast<char*>(header), kTagHeaderBytes);
    if (in.gcount() != static_cast<std::streamsize>(kTagHeaderBytes))
        throw TagFormatError(TagFormatErrorKind::truncated, "header shorter than 35 bytes");
    if (std::memcmp(header, kTagMagic, 8) != 0)
        throw TagFormatError(TagFormatErrorKind::bad_magic, "magic mismatch, expected TTAG0001");

    const std::uint16_t version = get_u16(header + 8);
    if (version != kTagFormatVersion)
        throw TagFormatError(TagFormatErrorKind::bad_header,
                             "unsupported format version " + std::to_string(version));
    TimeTagStream stream;
    stream.rep_period_ps = get_u64(header + 10);
    const int channel_count = header[18];
    stream.duration_ps = get_u64(header + 19);
    const std::uint64_t record_count = get_u64(header + 27);
    if (channel_count < 1)
        throw TagFormatError(TagFormatErrorKind::bad_header, "channel_count must be >= 1");

    stream.tags.reserve(record_count);
    std::vector<unsigned char> buf(kChunkRecords * kRecordBytes);
    std::uint64_t remaining = record_count;
    std::uint64_t prev_time = 0;
    std::uint8_t prev_channel = 0;
    while (remaining > 0) {
        const std::size_t want =
            static_cast<std::size_t>(std::min<std::uint64_t>(remaining, kChunkRecords));
        in.read(reinterpret_cast<char*>(buf.data()),
                static_cast<std::streamsize>(want * kRecordBytes));
        if (in.gcount() != static_cast<std::streamsize>(want * kRecordBytes))
            throw TagFormatError(TagFormatErrorKind::truncated,
                                 "payload ends before record_count records");
        for (std::size_t i = 0; i < want; ++i) {
            const unsigned char* rec = buf.data() + i * kRecordBytes;
            TimeTag tag{get_u64(rec + 1), rec[0]};
            if (tag.channel < 1 || tag.channel > channel_count)
                throw TagFormatError(TagFormatErrorKind::bad_record,
                                     "channel " + std::to_string(tag.channel) + " out of range");
            if (tag.time_ps < prev_time || (tag.time_ps == prev_time && tag.channel < prev_channel))
                throw TagFormatError(TagFormatErrorKind::non_monotonic,
                                     "record times are not sorted");
            prev_time = tag.time_ps;
            prev_channel = tag.channel;
            stream.tags.push_back(tag);
        }
        remaining -= want;
    }
    return stream;
}

TimeTagStream read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line))
        throw TagFormatError(TagFormatErrorKind::bad_magic, "empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "channel,time_ps")
        throw TagFormatError(TagFormatErrorKind::bad_magic,
                             "unrecognized format (neither TTAG0001 nor channel,time_ps)");
    TimeTagStream stream;
    stream.source = "csv";
    std::uint64_t prev_time = 0;
    std::uint8_t prev_channel = 0;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw TagFormatError(TagFormatErrorKind::bad_record,
                                 "line " + std::to_string(lineno) + ": missing comma");
        unsigned channel = 0;
        std::uint64_t time = 0;
        auto r1 = std::from_chars(line.data(), line.data() + comma, channel);
        auto r2 = std::from_chars(line.data() + comma + 1, line.data() + line.size(), time);
        if (r1.ec != std::errc{} || r2.ec != std::errc{} ||
            r2.ptr != line.data() + line.size() || channel < 1 || channel > 2)
            throw TagFormatError(TagFormatErrorKind::bad_record,
                                 "line " + std::to_string(lineno) + ": bad record");
        TimeTag tag{time, static_cast<std::uint8_t>(channel)};
        if (tag.time_ps < prev_time || (tag.time_ps == prev_time && tag.channel < prev_channel))
            throw TagFormatError(TagFormatErrorKind::non_monotonic, "CSV times are not sorted");
        prev_time = tag.time_ps;
        prev_channel = tag.channel;
        stream.tags.push_back(tag);
    }
    if (!stream.tags.empty()) stream.duration_ps = stream.tags.back().time_ps + 1;
    return stream;
}

}  // namespace

TimeTagStream read_tags(std::istream& in) {
    std::array<char, 8> head{};
    in.read(head.data(), head.size());
    const auto got = in.gcount();
    in.clear();
    in.seekg(0);
    if (got >= 8 && std::memcmp(head.data(), kTagMagic, 8) == 0) return read_binary(in);
    return read_csv(in);
}

TimeTagStream read_tags_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw TagFormatError(TagFormatErrorKind::io, "cannot open: " + path.string());
    auto stream = read_tags(in);
    if (stream.source.empty() || stream.source == "csv") stream.source = path.string();
    return stream;
}

TimeTagStream slice(const TimeTagStream& stream, std::uint64_t lo_ps, std::uint64_t hi_ps) {
    TimeTagStream out;
    out.rep_period_ps = stream.rep_period_ps;
    out.duration_ps = stream.duration_ps;
    out.source = stream.source;
    auto first = std::lower_bound(stream.tags.begin(), stream.tags.end(), lo_ps,
                                  [](const TimeTag& t, std::uint64_t v) { return t.time_ps < v; });
    auto last = std::lower_bound(first, stream.tags.end(), hi_ps,
                                 [](const TimeTag& t, std::uint64_t v) { return t.time_ps < v; });
    out.tags.assign(first, last);
    return out;
}

TimeTagStream merge(const TimeTagStream& a, const TimeTagStream& b) {
    TimeTagStream out;
    out.rep_period_ps = a.rep_period_ps ? a.rep_period_ps : b.rep_period_ps;
    out.duration_ps = std::max(a.duration_ps, b.duration_ps);
    out.source = a.source;
    out.tags.resize(a.tags.size() + b.tags.size());
    std::merge(a.tags.begin(), a.tags.end(), b.tags.begin(), b.tags.end(), out.tags.begin(),
               [](const TimeTag& x, const TimeTag& y) {
                   return x.time_ps != y.time_ps ? x.time_ps < y.time_ps : x.channel < y.channel;
               });
    return out;
}

}  // namespace tcspc
