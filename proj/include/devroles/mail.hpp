#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "devroles/common.hpp"
#include "devroles/identity.hpp"

namespace devroles {

struct Message {
  std::string message_id;
  RawIdentity author_identity;
  PersonId author = 0;
  UnixTime timestamp = 0;
  std::optional<std::string> in_reply_to;
  /// -1 until thread_messages() runs.
  std::int64_t thread_id = -1;

  bool operator==(const Message& o) const {
    return message_id == o.message_id && author_identity.name == o.author_identity.name &&
           author_identity.email == o.author_identity.email && timestamp == o.timestamp &&
           in_reply_to == o.in_reply_to;
  }
};

struct Thread {
  std::int64_t id = 0;
  /// Indices into the message list, ordered by (timestamp, message_id).
  std::vector<std::size_t> messages;
};

struct MailArchive {
  std::vector<Message> messages;
  Warnings warnings;
};

/// Reads an mboxo/mboxrd archive. One message per unique Message-ID, first
/// occurrence kept. Messages without a usable Date are dropped
/// ("unparseable_date"); missing Message-IDs are synthesized from a content
/// hash ("missing_message_id").
MailArchive parse_mbox(std::string_view text);
MailArchive parse_mbox(std::istream& in);

/// Splits a From header into display name and address. Handles
/// `Name <addr>`, `addr (Name)`, bare addresses and the "user at host"
/// obfuscation used by list archives.
RawIdentity parse_from_header(std::string_view value);

/// RFC 2822 date to unix seconds; nullopt when unparseable.
std::optional<UnixTime> parse_rfc2822_date(std::string_view value);

/// Groups messages into reply-graph components and assigns thread_id on each
/// message. Replies to unknown ids start their own thread. A reply cycle is
/// broken by dropping the parent link of its latest message. Thread ids follow
/// the order of each thread's first message.
std::vector<Thread> thread_messages(std::vector<Message>& messages);

}  // namespace devroles
