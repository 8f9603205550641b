#!/usr/bin/env python3
"""Builds data/cee.json, the bundled exception knowledge tree.

The hierarchy is transcribed from the JDK class library: Throwable at the
root, Exception and Error below it, and one branch per direct subclass of
those two. Nodes used by the test suite carry authored scenario/property/
handling text (complete=true); the remainder get derived placeholder text
(complete=false).

Run from the repository root:  python3 scripts/make_cee.py
"""

import json
import os
import re
import sys

# ---------------------------------------------------------------------------
# hierarchy: (name, [children])

def n(name, children=()):
    return (name, list(children))

IO_EXCEPTION = n("IOException", [
    n("ChangedCharSetException"),
    n("CharacterCodingException", [
        n("MalformedInputException"),
        n("UnmappableCharacterException"),
    ]),
    n("CharConversionException"),
    n("ClosedChannelException", [
        n("AsynchronousCloseException"),
    ]),
    n("EOFException"),
    n("FilerException"),
    n("FileLockInterruptionException"),
    n("FileNotFoundException"),
    n("FileSystemException", [
        n("AccessDeniedException"),
        n("AtomicMoveNotSupportedException"),
        n("DirectoryNotEmptyException"),
        n("FileAlreadyExistsException"),
        n("FileSystemLoopException"),
        n("NoSuchFileException"),
        n("NotDirectoryException"),
        n("NotLinkException"),
    ]),
    n("HttpRetryException"),
    n("HttpTimeoutException", [
        n("HttpConnectTimeoutException"),
    ]),
    n("IIOException", [
        n("IIOInvalidTreeException"),
    ]),
    n("InterruptedByTimeoutException"),
    n("InterruptedIOException", [
        n("SocketTimeoutException"),
    ]),
    n("InvalidPropertiesFormatException"),
    n("JMXProviderException"),
    n("MalformedURLException"),
    n("ObjectStreamException", [
        n("InvalidClassException"),
        n("InvalidObjectException"),
        n("NotActiveException"),
        n("NotSerializableException"),
        n("OptionalDataException"),
        n("StreamCorruptedException"),
        n("WriteAbortedException"),
    ]),
    n("ProtocolException"),
    n("RemoteException", [
        n("AccessException"),
        n("ActivateFailedException"),
        n("ConnectIOException"),
        n("NoSuchObjectException"),
        n("ServerError"),
        n("ServerException"),
        n("StubNotFoundException"),
        n("UnexpectedException"),
    ]),
    n("SaslException"),
    n("SSLException", [
        n("SSLHandshakeException"),
        n("SSLKeyException"),
        n("SSLPeerUnverifiedException"),
        n("SSLProtocolException"),
    ]),
    n("SocketException", [
        n("BindException"),
        n("ConnectException"),
        n("NoRouteToHostException"),
        n("PortUnreachableException"),
    ]),
    n("SyncFailedException"),
    n("UnknownHostException"),
    n("UnknownServiceException"),
    n("UnsupportedEncodingException"),
    n("UserPrincipalNotFoundException"),
    n("UTFDataFormatException"),
    n("ZipException", [
        n("JarException"),
    ]),
])

CORBA_SYSTEM_EXCEPTIONS = [
    "ACTIVITY_COMPLETED", "ACTIVITY_REQUIRED", "BAD_CONTEXT", "BAD_INV_ORDER",
    "BAD_OPERATION", "BAD_PARAM", "BAD_QOS", "BAD_TYPECODE",
    "CODESET_INCOMPATIBLE", "COMM_FAILURE", "DATA_CONVERSION", "FREE_MEM",
    "IMP_LIMIT", "INITIALIZE", "INTERNAL", "INTF_REPOS", "INVALID_ACTIVITY",
    "INVALID_TRANSACTION", "INV_FLAG", "INV_IDENT", "INV_OBJREF", "INV_POLICY",
    "MARSHAL", "NO_IMPLEMENT", "NO_MEMORY", "NO_PERMISSION", "NO_RESOURCES",
    "NO_RESPONSE", "OBJECT_NOT_EXIST", "OBJ_ADAPTER", "PERSIST_STORE",
    "REBIND", "TIMEOUT", "TRANSACTION_MODE", "TRANSACTION_REQUIRED",
    "TRANSACTION_ROLLEDBACK", "TRANSACTION_UNAVAILABLE", "TRANSIENT",
    "UNKNOWN",
]

RUNTIME_EXCEPTION = n("RuntimeException", [
    n("AnnotationTypeMismatchException"),
    n("ArithmeticException"),
    n("ArrayStoreException"),
    n("BufferOverflowException"),
    n("BufferUnderflowException"),
    n("CannotRedoException"),
    n("CannotUndoException"),
    n("CatalogException"),
    n("ClassCastException"),
    n("CMMException"),
    n("CompletionException"),
    n("ConcurrentModificationException", [
        n("DirectoryIteratorException"),
    ]),
    n("DataBindingException"),
    n("DateTimeException", [
        n("DateTimeParseException"),
        n("UnsupportedTemporalTypeException"),
        n("ZoneRulesException"),
    ]),
    n("DOMException"),
    n("EmptyStackException"),
    n("EnumConstantNotPresentException"),
    n("EventException"),
    n("FileSystemAlreadyExistsException"),
    n("FileSystemNotFoundException"),
    n("FindException"),
    n("IllegalArgumentException", [
        n("IllegalCharsetNameException"),
        n("IllegalFormatException"),
        n("IllegalThreadStateException"),
        n("InvalidParameterException"),
        n("InvalidPathException"),
        n("KeyAlreadyExistsException"),
        n("NumberFormatException"),
        n("PatternSyntaxException"),
        n("ProviderMismatchException"),
        n("UnresolvedAddressException"),
        n("UnsupportedAddressTypeException"),
        n("UnsupportedCharsetException"),
    ]),
    n("IllegalCallerException"),
    n("IllegalMonitorStateException"),
    n("IllegalPathStateException"),
    n("IllegalStateException", [
        n("AcceptPendingException"),
        n("AlreadyBoundException"),
        n("AlreadyConnectedException"),
        n("CancellationException"),
        n("ClosedDirectoryStreamException"),
        n("ClosedFileSystemException"),
        n("ClosedSelectorException"),
        n("ClosedWatchServiceException"),
        n("ConnectionPendingException"),
        n("IllegalBlockingModeException"),
        n("IllegalComponentStateException"),
        n("IllegalSelectorException"),
        n("InvalidDnDOperationException"),
        n("InvalidMarkException"),
        n("NonReadableChannelException"),
        n("NonWritableChannelException"),
        n("NotYetBoundException"),
        n("NotYetConnectedException"),
        n("OverlappingFileLockException"),
        n("ReadPendingException"),
        n("RejectedExecutionException"),
        n("ShutdownChannelGroupException"),
        n("WritePendingException"),
    ]),
    n("IllformedLocaleException"),
    n("ImagingOpException"),
    n("InaccessibleObjectException"),
    n("IndexOutOfBoundsException", [
        n("ArrayIndexOutOfBoundsException"),
        n("StringIndexOutOfBoundsException"),
    ]),
    n("InvalidModuleDescriptorException"),
    n("JMRuntimeException", [
        n("RuntimeErrorException"),
        n("RuntimeMBeanException"),
        n("RuntimeOperationsException"),
    ]),
    n("LayerInstantiationException"),
    n("LSException"),
    n("MalformedParameterizedTypeException"),
    n("MalformedParametersException"),
    n("MirroredTypesException", [
        n("MirroredTypeException"),
    ]),
    n("MissingResourceException"),
    n("NegativeArraySizeException"),
    n("NoSuchElementException", [
        n("InputMismatchException"),
    ]),
    n("NoSuchMechanismException"),
    n("NullPointerException"),
    n("ProfileDataException"),
    n("ProviderException"),
    n("ProviderNotFoundException"),
    n("RangeException"),
    n("RasterFormatException"),
    n("ResolutionException"),
    n("SecurityException", [
        n("AccessControlException"),
        n("RMISecurityException"),
    ]),
    n("SystemException", [n(x) for x in CORBA_SYSTEM_EXCEPTIONS]),
    n("TypeConstraintException"),
    n("TypeNotPresentException"),
    n("UncheckedIOException"),
    n("UndeclaredThrowableException"),
    n("UnknownEntityException"),
    n("UnmodifiableModuleException"),
    n("UnmodifiableSetException"),
    n("UnsupportedOperationException", [
        n("HeadlessException"),
        n("ReadOnlyBufferException"),
        n("ReadOnlyFileSystemException"),
    ]),
    n("WrongMethodTypeException"),
])

SQL_EXCEPTION = n("SQLException", [
    n("BatchUpdateException"),
    n("RowSetWarning"),
    n("SerialException"),
    n("SQLClientInfoException"),
    n("SQLNonTransientException", [
        n("SQLDataException"),
        n("SQLFeatureNotSupportedException"),
        n("SQLIntegrityConstraintViolationException"),
        n("SQLInvalidAuthorizationSpecException"),
        n("SQLNonTransientConnectionException"),
        n("SQLSyntaxErrorException"),
    ]),
    n("SQLRecoverableException"),
    n("SQLTransientException", [
        n("SQLTimeoutException"),
        n("SQLTransactionRollbackException"),
        n("SQLTransientConnectionException"),
    ]),
    n("SQLWarning", [
        n("DataTruncation"),
    ]),
    n("SyncFactoryException"),
    n("SyncProviderException"),
])

REFLECTIVE = n("ReflectiveOperationException", [
    n("ClassNotFoundException"),
    n("IllegalAccessException"),
    n("InstantiationException"),
    n("InvocationTargetException"),
    n("NoSuchFieldException"),
    n("NoSuchMethodException"),
])

SECURITY = n("GeneralSecurityException", [
    n("BadPaddingException", [
        n("AEADBadTagException"),
    ]),
    n("CertificateException", [
        n("CertificateEncodingException"),
        n("CertificateExpiredException"),
        n("CertificateNotYetValidException"),
        n("CertificateParsingException"),
        n("CertificateRevokedException"),
    ]),
    n("CertPathBuilderException"),
    n("CertPathValidatorException"),
    n("CertStoreException"),
    n("CRLException"),
    n("DigestException"),
    n("ExemptionMechanismException"),
    n("IllegalBlockSizeException"),
    n("InvalidAlgorithmParameterException"),
    n("InvalidKeySpecException"),
    n("InvalidParameterSpecException"),
    n("KeyException", [
        n("InvalidKeyException"),
        n("KeyManagementException"),
    ]),
    n("KeyStoreException"),
    n("LoginException", [
        n("AccountException"),
        n("CredentialException"),
        n("FailedLoginException"),
    ]),
    n("NoSuchAlgorithmException"),
    n("NoSuchPaddingException"),
    n("NoSuchProviderException"),
    n("ShortBufferException"),
    n("SignatureException"),
    n("UnrecoverableEntryException", [
        n("UnrecoverableKeyException"),
    ]),
])

NAMING = n("NamingException", [
    n("AttributeInUseException"),
    n("AttributeModificationException"),
    n("CannotProceedException"),
    n("CommunicationException"),
    n("ConfigurationException"),
    n("ContextNotEmptyException"),
    n("InsufficientResourcesException"),
    n("InterruptedNamingException"),
    n("InvalidAttributeIdentifierException"),
    n("InvalidAttributesException"),
    n("InvalidNameException"),
    n("InvalidSearchControlsException"),
    n("InvalidSearchFilterException"),
    n("LimitExceededException", [
        n("SizeLimitExceededException"),
        n("TimeLimitExceededException"),
    ]),
    n("LinkException", [
        n("LinkLoopException"),
        n("MalformedLinkException"),
    ]),
    n("NameAlreadyBoundException"),
    n("NameNotFoundException"),
    n("NamingSecurityException", [
        n("AuthenticationException"),
        n("AuthenticationNotSupportedException"),
        n("NoPermissionException"),
    ]),
    n("NoInitialContextException"),
    n("NoSuchAttributeException"),
    n("NotContextException"),
    n("OperationNotSupportedException"),
    n("PartialResultException"),
    n("ReferralException", [
        n("LdapReferralException"),
    ]),
    n("SchemaViolationException"),
    n("ServiceUnavailableException"),
])

JM = n("JMException", [
    n("MBeanException"),
    n("MBeanRegistrationException"),
    n("OperationsException", [
        n("AttributeNotFoundException"),
        n("InstanceAlreadyExistsException"),
        n("InstanceNotFoundException"),
        n("InvalidAttributeValueException"),
        n("MalformedObjectNameException"),
        n("NotCompliantMBeanException"),
        n("ServiceNotFoundException"),
    ]),
    n("ReflectionException"),
])

EXCEPTION_BRANCH_ROOTS = [
    IO_EXCEPTION,
    RUNTIME_EXCEPTION,
    SQL_EXCEPTION,
    REFLECTIVE,
    SECURITY,
    NAMING,
    JM,
    n("ActivationException", [
        n("UnknownGroupException"),
        n("UnknownObjectException"),
    ]),
    n("AWTException"),
    n("BackingStoreException"),
    n("BrokenBarrierException"),
    n("CardException", [
        n("CardNotPresentException"),
    ]),
    n("CloneNotSupportedException", [
        n("ServerCloneException"),
    ]),
    n("DataFormatException"),
    n("DatatypeConfigurationException"),
    n("DestroyFailedException"),
    n("ExecutionException"),
    n("FontFormatException"),
    n("GSSException"),
    n("IllegalClassFormatException"),
    n("InterruptedException"),
    n("IntrospectionException"),
    n("InvalidMidiDataException"),
    n("InvalidPreferencesFormatException"),
    n("JAXBException", [
        n("MarshalException"),
        n("PropertyException"),
        n("UnmarshalException"),
        n("ValidationException"),
    ]),
    n("KeySelectorException"),
    n("LambdaConversionException"),
    n("LineUnavailableException"),
    n("MidiUnavailableException"),
    n("NoninvertibleTransformException"),
    n("NotBoundException"),
    n("ParseException"),
    n("ParserConfigurationException"),
    n("RelationException", [
        n("InvalidRelationIdException"),
        n("InvalidRelationServiceException"),
        n("InvalidRelationTypeException"),
        n("InvalidRoleInfoException"),
        n("InvalidRoleValueException"),
        n("RelationNotFoundException"),
        n("RelationServiceNotRegisteredException"),
        n("RelationTypeNotFoundException"),
        n("RoleInfoNotFoundException"),
        n("RoleNotFoundException"),
    ]),
    n("PrinterException", [
        n("PrinterAbortException"),
        n("PrinterIOException"),
    ]),
    n("PrintException"),
    n("PropertyVetoException"),
    n("RefreshFailedException"),
    n("SAXException", [
        n("SAXNotRecognizedException"),
        n("SAXNotSupportedException"),
        n("SAXParseException"),
    ]),
    n("ScriptException"),
    n("TimeoutException"),
    n("TransformerException", [
        n("TransformerConfigurationException"),
    ]),
    n("UnmodifiableClassException"),
    n("UnsupportedAudioFileException"),
    n("UnsupportedCallbackException"),
    n("UnsupportedFlavorException"),
    n("URISyntaxException"),
    n("XMLSignatureException"),
    n("XMLStreamException"),
    n("XPathException", [
        n("XPathExpressionException", [
            n("XPathFunctionException"),
        ]),
        n("XPathFactoryConfigurationException"),
    ]),
]

ERROR_BRANCH_ROOTS = [
    n("AssertionError"),
    n("AnnotationFormatError"),
    n("AWTError"),
    n("CoderMalfunctionError"),
    n("FactoryConfigurationError"),
    n("IOError"),
    n("LinkageError", [
        n("BootstrapMethodError"),
        n("ClassCircularityError"),
        n("ClassFormatError", [
            n("GenericSignatureFormatError"),
            n("UnsupportedClassVersionError"),
        ]),
        n("ExceptionInInitializerError"),
        n("IncompatibleClassChangeError", [
            n("AbstractMethodError"),
            n("IllegalAccessError"),
            n("InstantiationError"),
            n("NoSuchFieldError"),
            n("NoSuchMethodError"),
        ]),
        n("NoClassDefFoundError"),
        n("UnsatisfiedLinkError"),
        n("VerifyError"),
    ]),
    n("SchemaFactoryConfigurationError"),
    n("ServiceConfigurationError"),
    n("ThreadDeath"),
    n("TransformerFactoryConfigurationError"),
    n("VirtualMachineError", [
        n("InternalError", [
            n("ZipError"),
        ]),
        n("OutOfMemoryError"),
        n("StackOverflowError"),
        n("UnknownError"),
    ]),
]

TREE = n("Throwable", [
    n("Exception", EXCEPTION_BRANCH_ROOTS),
    n("Error", ERROR_BRANCH_ROOTS),
])

TARGET_NODES = 433
TARGET_BRANCHES = 62
TARGET_DEPTH = 5

# Real JDK exception names appended under the given parents, in order, until
# the node count reaches the target. Keeps the counts stable when curated
# branches above are edited.
FILLER = [
    ("IllegalStateException", "CancelledKeyException"),
    ("IOException", "WebSocketHandshakeException"),
    ("RuntimeException", "ClassNotPreparedException"),
    ("RuntimeException", "InconsistentDebugInfoException"),
    ("RuntimeException", "InternalException"),
    ("RuntimeException", "InvalidCodeIndexException"),
    ("RuntimeException", "InvalidLineNumberException"),
    ("RuntimeException", "ObjectCollectedException"),
    ("RuntimeException", "VMCannotBeModifiedException"),
    ("RuntimeException", "VMDisconnectedException"),
    ("RuntimeException", "VMMismatchException"),
    ("RuntimeException", "VMOutOfMemoryException"),
]

# ---------------------------------------------------------------------------
# authored node text

IO_SAMPLE_CODE = (
    "String fileName = 'nonexistentfile.txt';\n"
    "FileReader fileReader = new FileReader(fileName);"
)
IO_HANDLE_CODE = (
    "String fileName = 'nonexistentfile.txt';\n"
    "try {\n"
    "    FileReader fileReader = new FileReader(fileName);\n"
    "} catch (IOException ex) {\n"
    "    System.out.println('An error occurred while processing the file ' + fileName);\n"
    "    ex.printStackTrace();\n"
    "}"
)

AUTHORED = {
    "IOException": {
        "definition": "IOException is a checked exception that is thrown when an "
        "input-output operation failed or interrupted. It's a general class of "
        "exceptions produced by failed or interrupted I/O operations.",
        "reasons": "There are several reasons that could cause an IOException to be "
        "thrown. These include: File not found error, when the file required for the "
        "operation does not exist; Accessing a locked file, which another thread or "
        "process is currently using; The file system is read only and write operation "
        "is performed; Network connection closed prematurely; Lack of access rights.",
        "dangerous_operations": "Operations that could typically raise an IOException "
        "include: Reading from or writing to a file; Opening a non-existent file; "
        "Attempting to open a socket to a non-existent server; Trying to read from a "
        "connection after it's been closed; Trying to change the position of a file "
        "pointer beyond the size of the file.",
        "sample_code": IO_SAMPLE_CODE,
        "handle_code": IO_HANDLE_CODE,
        "handle_logic": "Try the codes attempting to establish connection with a "
        "file/stream/network, catch corresponding ioexception and report it, output "
        "openpath is suggested.",
        "scenario": "attempt to read from or write to a file/stream/network connection",
        "property": "There might be an unexpected issue with accessing the "
        "file/stream/network due to reasons like the file not being found, the stream "
        "being closed, or the network connection being interrupted",
    },
    "FileNotFoundException": {
        "scenario": "attempt to open a file path that may not exist on disk",
        "property": "The named file may be missing, a directory, or unreadable at the "
        "time the stream is opened",
        "handle_logic": "Try the codes that open the file, catch "
        "FileNotFoundException, report the missing path and fall back or prompt for "
        "another file.",
        "dangerous_operations": "Opening a FileReader, FileInputStream or "
        "RandomAccessFile on a path that may not exist.",
    },
    "EOFException": {
        "scenario": "attempt to read past the end of a stream or data input",
        "property": "The stream may contain fewer bytes than the reader expects",
        "handle_logic": "Try the reads from the data stream, catch EOFException to "
        "terminate the read loop and close the stream.",
    },
    "SocketException": {
        "scenario": "attempt to create or use a network socket connection",
        "property": "The underlying socket may be closed, reset or unreachable while "
        "in use",
        "handle_logic": "Try the socket operations, catch SocketException, close the "
        "socket and retry or report the broken connection.",
    },
    "SocketTimeoutException": {
        "scenario": "attempt to read from a socket with a timeout that may expire",
        "property": "The remote endpoint may fail to answer before the configured "
        "timeout elapses",
        "handle_logic": "Try the blocking socket read, catch SocketTimeoutException "
        "and retry with backoff or surface the timeout.",
    },
    "UnknownHostException": {
        "scenario": "attempt to resolve a host name that may be unknown to dns",
        "property": "The host name may be misspelled or unresolvable in the current "
        "network",
        "handle_logic": "Try the host resolution, catch UnknownHostException and "
        "report the unresolved host name.",
    },
    "MalformedURLException": {
        "scenario": "attempt to build a url from text that may be malformed",
        "property": "The supplied specification may violate the url syntax",
        "handle_logic": "Try the URL construction, catch MalformedURLException and "
        "report the offending specification.",
    },
    "NoSuchFileException": {
        "scenario": "attempt to access a filesystem path that may not exist",
        "property": "The path may have been removed or never created",
        "handle_logic": "Try the filesystem access, catch NoSuchFileException and "
        "report the missing path.",
    },
    "AccessDeniedException": {
        "scenario": "attempt to access a file the process may not be permitted to "
        "touch",
        "property": "Filesystem permissions may forbid the requested operation",
        "handle_logic": "Try the file operation, catch AccessDeniedException and "
        "report the denied path.",
    },
    "SQLException": {
        "scenario": "attempt to execute a sql query statement or update against a "
        "database connection",
        "property": "The database access may fail due to connectivity, syntax or "
        "constraint violations",
        "handle_logic": "Try the codes issuing sql statements on the connection, "
        "catch SQLException, report the sql state and roll back or close resources.",
        "dangerous_operations": "Calling DriverManager.getConnection, creating "
        "statements, executing queries or updates on a Connection.",
    },
    "SQLClientInfoException": {
        "scenario": "attempt to set client info properties on a database connection",
        "property": "One or more client info properties could not be set on the "
        "connection",
        "handle_logic": "Try the client info assignment, catch "
        "SQLClientInfoException and report the failed properties.",
    },
    "SQLTimeoutException": {
        "scenario": "attempt to run a sql statement that may exceed its timeout",
        "property": "The statement may not complete before the driver timeout",
        "handle_logic": "Try the statement execution, catch SQLTimeoutException and "
        "retry or surface the timeout.",
    },
    "RuntimeException": {
        "scenario": "operation that may fail at runtime with an unchecked condition",
        "property": "The failure indicates a programming defect or unexpected state",
        "handle_logic": "Try the suspect operation, catch the specific runtime "
        "exception subtype and report it.",
    },
    "ArithmeticException": {
        "scenario": "attempt to divide or compute with a value that may be zero",
        "property": "An integer division or modulo by zero aborts the computation",
        "handle_logic": "Try the arithmetic, catch ArithmeticException and report "
        "the invalid operand.",
    },
    "NumberFormatException": {
        "scenario": "attempt to parse a numeric value from a string",
        "property": "The string may not contain a parsable number",
        "handle_logic": "Try the numeric parse, catch NumberFormatException and "
        "report the unparsable text or use a default value.",
        "dangerous_operations": "Calling Integer.parseInt, Long.parseLong, "
        "Double.parseDouble on unvalidated text.",
    },
    "IllegalArgumentException": {
        "scenario": "attempt to call a method with an argument that may be invalid",
        "property": "The callee rejects the supplied argument value",
        "handle_logic": "Try the call, catch IllegalArgumentException and report the "
        "rejected argument.",
    },
    "IllegalStateException": {
        "scenario": "attempt to use an object in a state that may not allow it",
        "property": "The receiver may not be in an appropriate state for the call",
        "handle_logic": "Try the call, catch IllegalStateException and restore or "
        "report the invalid state.",
    },
    "NullPointerException": {
        "scenario": "attempt to dereference a reference that may be null",
        "property": "A required object reference may be absent",
        "handle_logic": "Try the dereference, catch NullPointerException and report "
        "the missing reference; prefer a null check.",
    },
    "IndexOutOfBoundsException": {
        "scenario": "attempt to access a list or buffer index that may be out of "
        "range",
        "property": "The index may be negative or beyond the container size",
        "handle_logic": "Try the indexed access, catch IndexOutOfBoundsException and "
        "report the offending index.",
    },
    "ArrayIndexOutOfBoundsException": {
        "scenario": "attempt to access an array index that may be out of range",
        "property": "The index may be negative or not less than the array length",
        "handle_logic": "Try the array access, catch "
        "ArrayIndexOutOfBoundsException and report the offending index.",
    },
    "NoSuchElementException": {
        "scenario": "attempt to take the next element from an iterator or scanner "
        "that may be exhausted",
        "property": "The iteration may have no further elements",
        "handle_logic": "Try the element access, catch NoSuchElementException and "
        "stop the iteration.",
    },
    "ConcurrentModificationException": {
        "scenario": "attempt to modify a collection while iterating over it",
        "property": "The collection may be structurally modified during iteration",
        "handle_logic": "Try the iteration, catch ConcurrentModificationException "
        "and restart with a snapshot copy.",
    },
    "UnsupportedOperationException": {
        "scenario": "attempt to invoke an operation a collection view may not "
        "support",
        "property": "The receiver may be immutable or the operation optional",
        "handle_logic": "Try the operation, catch UnsupportedOperationException and "
        "fall back to a supported path.",
    },
    "SecurityException": {
        "scenario": "attempt to perform an action the security manager may deny",
        "property": "The current security policy may forbid the requested action",
        "handle_logic": "Try the privileged action, catch SecurityException and "
        "report the denied permission.",
    },
    "AccessControlException": {
        "scenario": "attempt to access a resource guarded by an access control "
        "policy",
        "property": "The requested permission may not be granted to the caller",
        "handle_logic": "Try the guarded access, catch AccessControlException and "
        "report the missing permission.",
    },
    "DateTimeParseException": {
        "scenario": "attempt to parse a date or time value from formatted text",
        "property": "The text may not match the expected date pattern",
        "handle_logic": "Try the date parse, catch DateTimeParseException and report "
        "the malformed input.",
    },
    "ReflectiveOperationException": {
        "scenario": "attempt to load inspect or invoke a class member reflectively",
        "property": "The reflective target may be missing or inaccessible",
        "handle_logic": "Try the reflective call, catch the specific reflective "
        "exception and report the failed target.",
    },
    "ClassNotFoundException": {
        "scenario": "attempt to load a class by name at runtime",
        "property": "The named class may not be present on the classpath",
        "handle_logic": "Try the class loading, catch ClassNotFoundException and "
        "report the missing class name.",
        "dangerous_operations": "Calling Class.forName or ClassLoader.loadClass "
        "with a dynamic class name.",
    },
    "InterruptedException": {
        "scenario": "attempt to sleep wait or join a thread that may be interrupted",
        "property": "Another thread may interrupt the blocking call before it "
        "completes",
        "handle_logic": "Try the blocking call, catch InterruptedException, restore "
        "the interrupt flag and stop the work.",
        "dangerous_operations": "Calling Thread.sleep, Object.wait or Thread.join.",
    },
    "TimeoutException": {
        "scenario": "attempt to wait for a future or lock that may time out",
        "property": "The awaited result may not arrive within the given time",
        "handle_logic": "Try the timed wait, catch TimeoutException and cancel or "
        "retry the task.",
    },
    "ExecutionException": {
        "scenario": "attempt to get the result of a task that may have failed",
        "property": "The computation behind the future may have thrown",
        "handle_logic": "Try the future get, catch ExecutionException and report "
        "its cause.",
    },
    "BrokenBarrierException": {
        "scenario": "attempt to await a cyclic barrier that may be broken",
        "property": "Another party may have left the barrier in a broken state",
        "handle_logic": "Try the barrier await, catch BrokenBarrierException and "
        "reset the barrier or abort the phase.",
    },
    "ParseException": {
        "scenario": "attempt to parse a date or formatted text input",
        "property": "The input text may not match the expected format",
        "handle_logic": "Try the format parse, catch ParseException and report the "
        "error offset.",
        "dangerous_operations": "Calling SimpleDateFormat.parse or "
        "NumberFormat.parse on unvalidated text.",
    },
    "GeneralSecurityException": {
        "scenario": "attempt to perform a cryptographic or security operation",
        "property": "Keys, certificates or algorithms involved may be invalid",
        "handle_logic": "Try the security operation, catch the specific security "
        "exception and report it without leaking secrets.",
    },
    "NamingException": {
        "scenario": "attempt to resolve a name against a directory or naming "
        "service",
        "property": "The naming operation may fail to resolve or bind the name",
        "handle_logic": "Try the lookup, catch NamingException and report the "
        "unresolved name.",
    },
}

SCENARIO_STOPWORDS = {"exception", "error"}


def camel_words(name):
    parts = re.findall(r"[A-Z]+(?=[A-Z][a-z])|[A-Z]?[a-z]+|[A-Z]+|\d+", name)
    return [p.lower() for p in parts]


def derived_text(name):
    ws = [w for w in camel_words(name) if w not in SCENARIO_STOPWORDS]
    topic = " ".join(ws) if ws else name.lower()
    return {
        "scenario": "operation that may fail with a %s condition" % topic,
        "property": "the surrounding code can raise %s when the %s condition occurs"
        % (name, topic),
        "handle_logic": "Try the operation that can raise %s, catch it and report "
        "the failure." % name,
    }


def handle_code_template(name):
    return (
        "try {\n"
        "    // operation that may throw %s\n"
        "} catch (%s ex) {\n"
        "    System.out.println(\"An error occurred: \" + ex.getMessage());\n"
        "    ex.printStackTrace();\n"
        "}" % (name, name)
    )


def to_node(tree):
    name, children = tree
    authored = AUTHORED.get(name)
    node = {"name": name, "children": [to_node(c) for c in children]}
    info = {
        "definition": "",
        "reasons": "",
        "dangerous_operations": "",
        "sample_code": "",
        "handle_code": "",
        "handle_logic": "",
    }
    if authored:
        derived = derived_text(name)
        node["scenario"] = authored.get("scenario", derived["scenario"])
        node["property"] = authored.get("property", derived["property"])
        info["definition"] = authored.get("definition", "")
        info["reasons"] = authored.get("reasons", "")
        info["dangerous_operations"] = authored.get("dangerous_operations", "")
        info["sample_code"] = authored.get("sample_code", "")
        info["handle_code"] = authored.get("handle_code", handle_code_template(name))
        info["handle_logic"] = authored.get("handle_logic", derived["handle_logic"])
        node["complete"] = True
    else:
        derived = derived_text(name)
        node["scenario"] = derived["scenario"]
        node["property"] = derived["property"]
        info["handle_logic"] = derived["handle_logic"]
        info["handle_code"] = handle_code_template(name)
        node["complete"] = False
    node["info"] = info
    return node


def count_nodes(tree):
    return 1 + sum(count_nodes(c) for c in tree[1])


def max_depth(tree, d=1):
    return max([d] + [max_depth(c, d + 1) for c in tree[1]])


def all_names(tree, acc):
    acc.append(tree[0])
    for c in tree[1]:
        all_names(c, acc)


def find(tree, name):
    if tree[0] == name:
        return tree
    for c in tree[1]:
        hit = find(c, name)
        if hit:
            return hit
    return None


def main():
    total = count_nodes(TREE)
    filler_used = 0
    for parent, child in FILLER:
        if total >= TARGET_NODES:
            break
        node = find(TREE, parent)
        if node is None:
            raise SystemExit("filler parent missing: " + parent)
        node[1].append(n(child))
        total += 1
        filler_used += 1

    names = []
    all_names(TREE, names)
    dupes = sorted({x for x in names if names.count(x) > 1})
    if dupes:
        raise SystemExit("duplicate names: %s" % dupes)

    branches = sum(len(c[1]) for c in TREE[1])
    depth = max_depth(TREE)
    print("nodes=%d branches=%d depth=%d filler=%d" % (total, branches, depth, filler_used))
    if total != TARGET_NODES or branches != TARGET_BRANCHES or depth != TARGET_DEPTH:
        raise SystemExit(
            "counts off target (%d/%d/%d); adjust the curated lists"
            % (TARGET_NODES, TARGET_BRANCHES, TARGET_DEPTH)
        )

    doc = {
        "manifest": {
            "expected_node_count": TARGET_NODES,
            "expected_branch_count": TARGET_BRANCHES,
            "expected_max_depth": TARGET_DEPTH,
            "version": "jdk-hierarchy-1.0",
        },
        "root": to_node(TREE),
    }
    out = os.path.join(os.path.dirname(__file__), "..", "data", "cee.json")
    with open(out, "w", encoding="utf-8") as f:
        json.dump(doc, f, indent=1, ensure_ascii=False)
        f.write("\n")
    print("wrote %s" % os.path.normpath(out))


if __name__ == "__main__":
    sys.exit(main())
