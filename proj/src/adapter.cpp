#include "splicegen/adapter.hpp"

#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <thread>

#include <fcntl.h>
#include <signal.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include "splicegen/image_io.hpp"

namespace splicegen::adapter {

namespace fs = std::filesystem;

std::string to_string(AdapterKind k) {
    switch (k) {
        case AdapterKind::Matting: return "matting";
        case AdapterKind::Harmonization: return "harmonization";
        case AdapterKind::Rationality: return "rationality";
    }
    return "unknown";
}

const char* env_var(AdapterKind k) {
    switch (k) {
        case AdapterKind::Matting: return "SPLICEGEN_MATTING_CMD";
        case AdapterKind::Harmonization: return "SPLICEGEN_HARMONIZATION_CMD";
        case AdapterKind::Rationality: return "SPLICEGEN_RATIONALITY_CMD";
    }
    return "";
}

const char* output_filename(AdapterKind k) {
    switch (k) {
        case AdapterKind::Matting: return "alpha.png";
        case AdapterKind::Harmonization: return "harmonized.png";
        case AdapterKind::Rationality: return "scores.png";
    }
    return "";
}

std::optional<AdapterCommand> command_from_env(AdapterKind kind) {
    const char* cmd = std::getenv(env_var(kind));
    if (cmd == nullptr || *cmd == '\0') return std::nullopt;
    AdapterCommand out{cmd, 120.0};
    if (const char* t = std::getenv("SPLICEGEN_ADAPTER_TIMEOUT"); t != nullptr && *t != '\0') {
        char* end = nullptr;
        const double v = std::strtod(t, &end);
        if (end != t && v > 0.0) out.timeout_seconds = v;
    }
    return out;
}

std::string expand_template(const std::string& tmpl, const fs::path& workdir) {
    static const std::string key = "{workdir}";
    std::string out;
    std::size_t pos = 0;
    for (;;) {
        const std::size_t hit = tmpl.find(key, pos);
        if (hit == std::string::npos) break;
        out.append(tmpl, pos, hit - pos);
        out += workdir.string();
        pos = hit + key.size();
    }
    out.append(tmpl, pos);
    return out;
}

fs::path run_adapter(const AdapterJob& job, const AdapterCommand& command) {
    if (!fs::is_directory(job.workdir))
        throw AdapterError("adapter workdir does not exist: " + job.workdir.string());
    const fs::path output = job.workdir / output_filename(job.kind);
    fs::remove(output);
    const std::string cmd = expand_template(command.command_template, job.workdir);
    const std::string log = (job.workdir / "adapter.log").string();

    const pid_t pid = fork();
    if (pid < 0) throw AdapterError("fork failed");
    if (pid == 0) {
        setpgid(0, 0);
        const int fd = open(log.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
        if (fd >= 0) {
            dup2(fd, STDOUT_FILENO);
            dup2(fd, STDERR_FILENO);
            close(fd);
        }
        execl("/bin/sh", "sh", "-c", cmd.c_str(), static_cast<char*>(nullptr));
        _exit(127);
    }
    setpgid(pid, pid);

    const auto deadline = std::chrono::steady_clock::now() +
                          std::chrono::duration<double>(command.timeout_seconds);
    int status = 0;
    for (;;) {
        const pid_t r = waitpid(pid, &status, WNOHANG);
        if (r == pid) break;
        if (r < 0 && errno != EINTR) throw AdapterError("waitpid failed");
        if (std::chrono::steady_clock::now() >= deadline) {
            kill(-pid, SIGKILL);
            kill(pid, SIGKILL);
            waitpid(pid, &status, 0);
            throw AdapterError(to_string(job.kind) + " adapter timed out");
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
    if (!WIFEXITED(status) || WEXITSTATUS(status) != 0)
        throw AdapterError(to_string(job.kind) + " adapter exited with failure");
    if (!fs::is_regular_file(output))
        throw AdapterError(to_string(job.kind) + " adapter produced no " +
                           output_filename(job.kind));
    return output;
}

namespace {

fs::path prepare(const fs::path& workdir) {
    fs::create_directories(workdir);
    return workdir;
}

}  // namespace

AlphaMatte external_matting(const AdapterCommand& command, const fs::path& workdir,
                            const ImageBuffer& image, const matting::Trimap& trimap) {
    require_same_dims(image.dims(), trimap.dims(), "external_matting");
    prepare(workdir);
    io::write_png(workdir / "input.png", image);
    io::write_gray8(workdir / "trimap.png", trimap.width(), trimap.height(), trimap.to_bytes());
    const fs::path out = run_adapter({AdapterKind::Matting, workdir}, command);
    AlphaMatte alpha;
    try {
        alpha = io::read_alpha(out);
    } catch (const Error& e) {
        throw AdapterError(std::string("malformed alpha.png: ") + e.what());
    }
    if (alpha.dims() != trimap.dims()) throw AdapterError("alpha.png has wrong dimensions");
    return alpha;
}

ImageBuffer external_harmonization(const AdapterCommand& command, const fs::path& workdir,
                                   const ImageBuffer& composite, const BinaryMask& mask) {
    require_same_dims(composite.dims(), mask.dims(), "external_harmonization");
    prepare(workdir);
    io::write_png(workdir / "composite.png", composite);
    io::write_mask(workdir / "mask.png", mask);
    const fs::path out = run_adapter({AdapterKind::Harmonization, workdir}, command);
    ImageBuffer img;
    try {
        img = io::read_image(out, 3);
    } catch (const Error& e) {
        throw AdapterError(std::string("malformed harmonized.png: ") + e.what());
    }
    if (img.dims() != composite.dims()) throw AdapterError("harmonized.png has wrong dimensions");
    return img;
}

std::vector<double> external_rationality(const AdapterCommand& command, const fs::path& workdir,
                                         const ImageBuffer& background, const ImageBuffer& object) {
    const int gw = background.width() - object.width() + 1;
    const int gh = background.height() - object.height() + 1;
    if (gw < 1 || gh < 1) throw AdapterError("object does not fit in background");
    prepare(workdir);
    io::write_png(workdir / "background.png", background);
    io::write_png(workdir / "object.png", object);
    const fs::path out = run_adapter({AdapterKind::Rationality, workdir}, command);
    int w = 0;
    int h = 0;
    std::vector<std::uint8_t> bytes;
    try {
        bytes = io::read_gray8(out, w, h);
    } catch (const Error& e) {
        throw AdapterError(std::string("malformed scores.png: ") + e.what());
    }
    if (w != gw || h != gh) throw AdapterError("scores.png has wrong dimensions");
    std::vector<double> scores(bytes.size());
    for (std::size_t i = 0; i < bytes.size(); ++i) scores[i] = io::from_byte(bytes[i]);
    return scores;
}

}  // namespace splicegen::adapter
