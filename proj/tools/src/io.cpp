#include <atomic>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include <json.hpp>

#include "evqc/error.hpp"
#include "evqc_cli/cli.hpp"

namespace evqc::cli {

SpinSystem parse_spin_system(std::string_view json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error &e) {
        throw ParseError(std::string("spin system file is not valid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("omega") || !j.contains("theta")) {
        throw ParseError("spin system needs \"omega\" and \"theta\"");
    }
    try {
        auto omega = j.at("omega").get<std::vector<double>>();
        const double theta = j.at("theta").get<double>();
        if (j.contains("n") && j.at("n").get<std::size_t>() != omega.size()) {
            throw ParseError("spin system \"n\" does not match the omega count");
        }
        std::vector<Coupling> couplings;
        if (j.contains("couplings")) {
            for (const auto &c : j.at("couplings")) {
                if (!c.is_array() || c.size() != 3) {
                    throw ParseError("each coupling must be [i, j, J]");
                }
                couplings.push_back({c[0].get<unsigned>(), c[1].get<unsigned>(), c[2].get<double>()});
            }
        }
        return SpinSystem(std::move(omega), theta, std::move(couplings));
    } catch (const nlohmann::json::exception &e) {
        throw ParseError(std::string("malformed spin system: ") + e.what());
    }
}

std::string read_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open '" + path.string() + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

SpinSystem load_spin_system(const std::filesystem::path &path) {
    return parse_spin_system(read_file(path));
}

void write_file_atomic(const std::filesystem::path &path, std::string_view content) {
    static std::atomic<unsigned> counter{0};
    auto tmp = path;
    tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++);
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error("cannot write '" + tmp.string() + "'");
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            std::filesystem::remove(tmp);
            throw Error("write to '" + tmp.string() + "' failed");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw Error("cannot move output into '" + path.string() + "': " + ec.message());
    }
}

} // namespace evqc::cli
