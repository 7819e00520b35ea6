// Copyright 2026 The CroSysLog Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Preprocessing golden cases, shared by the unit and acceptance suites.
#ifndef CROSYSLOG_TESTS_PREPROCESS_GOLDEN_HPP_
#define CROSYSLOG_TESTS_PREPROCESS_GOLDEN_HPP_

#include <string>
#include <vector>

namespace crosyslog::testing {

struct PreprocessGolden {
  std::string raw;
  std::string expected;
};

// Two documented substitutions, then hand-applied rules on published
// example lines from the four systems. {IP address} / {Mac address}
// placeholders in the source lines are filled with concrete values.
inline const std::vector<PreprocessGolden>& preprocess_golden_cases() {
  static const std::vector<PreprocessGolden> cases = {
      {"/home/user/docs/file123.txt", "file path"},
      {"P00:1A:2B:**:**:**", "mac address"},

      {"KERNEL INFO\tinstruction cache parity error corrected",
       "kernel info instruction cache parity error corrected"},
      {"KERNEL\tFATAL\tmachine check interrupt", "kernel fatal machine check interrupt"},
      {"APP\tFATAL ciod: Error loading path: invalid or missing program image, No such file or directory",
       "app fatal ciod error loading path invalid or missing program image no such file or directory"},
      {"MMCS INFO ciodb has been restarted.", "mmcs info ciodb has been restarted"},
      {"kernel: Losing some ticks... checking if CPU frequency changed",
       "kernel losing some ticks checking if cpu frequency changed"},
      {"pbs mom: Connection refused (111) in open demux, open demux: cannot[...]",
       "pbs mom connection refused in open demux open demux cannot"},
      {"Accepted publickey for root from 10.100.4.251 port 44278 ssh2",
       "accepted publickey for root from ip address port ssh"},
      {"session opened for user root by (uid=0)", "session opened for user root by uid"},
      {"check-disks: [node:time] , Fault Status assert [...]", "checkdisks nodetime fault status assert"},
      {"pbs_mom Bad file descriptor (9) in wait_request, select failed",
       "pbsmom bad file descriptor in waitrequest select failed"},
      {"pbs_mom, wait_request failed", "pbsmom waitrequest failed"},
      {"sshd connection from \"#1335#\"", "sshd connection from"},
      {"sshd Local disconnected: Connection closed by remote host.",
       "sshd local disconnected connection closed by remote host"},
      {"kernel: cciss: cmd 0000010000a60000 has CHECK CONDITION",
       "kernel cciss cmd hex address has check condition"},
      {"DHCPREQUEST for 10.0.3.7 from 00:11:22:aa:bb:cc via eth1: unknown lease 10.0.3.7.",
       "dhcprequest for ip address from mac address via eth unknown lease ip address"},
      {"STATS: dropped 42152", "stats dropped"},
      {"syslog-ng startup succeeded", "syslogng startup succeeded"},
      {"Changing permissions on special file /dev/logsurfer",
       "changing permissions on special file file path"},
      {"DHCPREQUEST for 10.0.3.7 from P00:1A:2B:**:**:** via eth1: unknown lease 10.0.3.7.",
       "dhcprequest for ip address from mac address via eth unknown lease ip address"},
      {"Accepted publickey for root from 10.100.4.251:22 port 44278 ssh2",
       "accepted publickey for root from ip address port ssh"},
      {"kernel: cciss: cmd 0x0000010000a60000 has CHECK CONDITION",
       "kernel cciss cmd hex address has check condition"},
      {"ciod: Error loading /bgl/apps/job42/a.out: invalid or missing program image, No such file or directory",
       "ciod error loading file path invalid or missing program image no such file or directory"},
  };
  return cases;
}

/// The first kDocumentedGoldens entries are the two documented substitutions.
inline constexpr std::size_t kDocumentedGoldens = 2;

}  // namespace crosyslog::testing

#endif  // CROSYSLOG_TESTS_PREPROCESS_GOLDEN_HPP_
